#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Run configuration: a flat key/value store fed by a TOML-style file
// ([section] headers, key = value scalars, # comments) plus repeatable
// --set section.key=value overrides. All physical keys carry explicit unit
// suffixes (a_um, U_L_uK, Delta1_THz, ...); conversion happens in the
// commands, nowhere else.
namespace latqc_cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class RunConfig {
 public:
  RunConfig() = default;

  // parse a config file; keys become "section.key"
  void load_file(const std::string& path);
  // apply one "section.key=value" override
  void set_override(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double get_number(const std::string& key, double fallback) const;
  double require_number(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // comma-separated list of numbers in a string value
  std::vector<double> get_number_list(const std::string& key) const;

  const std::map<std::string, std::string>& raw() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace latqc_cli
