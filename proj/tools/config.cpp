#include "config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace latqc_cli {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments outside quotes
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(path + ":" + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(path + ":" + std::to_string(lineno) +
                          ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = strip_quotes(trim(line.substr(eq + 1)));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    values_[section.empty() ? key : section + "." + key] = value;
  }
}

void RunConfig::set_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects section.key=value, got '" + assignment + "'");
  values_[trim(assignment.substr(0, eq))] =
      strip_quotes(trim(assignment.substr(eq + 1)));
}

double RunConfig::get_number(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size())
      throw ConfigError(key + ": trailing characters in number '" + it->second + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError(key + ": not a number: '" + it->second + "'");
  }
}

double RunConfig::require_number(const std::string& key) const {
  if (!has(key)) throw ConfigError("missing required config key " + key);
  return get_number(key, 0.0);
}

long long RunConfig::get_int(const std::string& key, long long fallback) const {
  const double v = get_number(key, static_cast<double>(fallback));
  const long long n = static_cast<long long>(v);
  if (static_cast<double>(n) != v)
    throw ConfigError(key + ": expected an integer");
  return n;
}

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true") return true;
  if (it->second == "false") return false;
  throw ConfigError(key + ": expected true or false");
}

std::vector<double> RunConfig::get_number_list(const std::string& key) const {
  std::vector<double> out;
  auto it = values_.find(key);
  if (it == values_.end()) return out;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::invalid_argument&) {
      throw ConfigError(key + ": not a number list: '" + it->second + "'");
    }
  }
  return out;
}

}  // namespace latqc_cli
