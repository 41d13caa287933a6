#include "latqc/atomic_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "latqc/constants.hpp"

namespace latqc {

namespace {

using nlohmann::json;
namespace cst = constants;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw AtomDataError(path + ": " + what);
}

// {value, unit} quantity -> rad/s. Wavelength units convert via 2*pi*c/lambda.
double to_angular_frequency(const json& q, const std::string& path,
                            const std::string& ctx) {
  if (!q.is_object() || !q.contains("value") || !q.contains("unit"))
    fail(path, ctx + ": expected {value, unit}");
  const double v = q.at("value").get<double>();
  const std::string unit = q.at("unit").get<std::string>();
  if (unit == "rad/s") return v;
  if (unit == "Hz") return 2.0 * cst::pi * v;
  if (unit == "kHz") return 2.0 * cst::pi * v * 1e3;
  if (unit == "MHz") return 2.0 * cst::pi * v * 1e6;
  if (unit == "GHz") return 2.0 * cst::pi * v * 1e9;
  if (unit == "THz") return 2.0 * cst::pi * v * 1e12;
  if (unit == "nm") return 2.0 * cst::pi * cst::c_light / (v * 1e-9);
  if (unit == "um") return 2.0 * cst::pi * cst::c_light / (v * 1e-6);
  fail(path, ctx + ": unknown unit '" + unit + "'");
}

double to_seconds(const json& q, const std::string& path,
                  const std::string& ctx) {
  if (!q.is_object() || !q.contains("value") || !q.contains("unit"))
    fail(path, ctx + ": expected {value, unit}");
  const double v = q.at("value").get<double>();
  const std::string unit = q.at("unit").get<std::string>();
  if (unit == "s") return v;
  if (unit == "ms") return v * 1e-3;
  if (unit == "us") return v * 1e-6;
  if (unit == "ns") return v * 1e-9;
  fail(path, ctx + ": unknown unit '" + unit + "'");
}

double to_dipole_length(const json& q, const std::string& path,
                        const std::string& ctx) {
  if (!q.is_object() || !q.contains("value") || !q.contains("unit"))
    fail(path, ctx + ": expected {value, unit}");
  const double v = q.at("value").get<double>();
  const std::string unit = q.at("unit").get<std::string>();
  if (unit == "m") return v;
  if (unit == "a0_e" || unit == "a0*e" || unit == "ea0")
    return v * cst::a0_bohr;
  fail(path, ctx + ": unknown unit '" + unit + "'");
}

void validate(const AtomSpec& atom, const std::string& path) {
  if (atom.mass <= 0.0) fail(path, "mass_kg must be positive");
  if (atom.fine_levels.empty()) fail(path, "no levels");
  if (atom.lines.empty()) fail(path, "no transition lines");

  bool has_ground = false;
  for (const auto& lv : atom.fine_levels) {
    if (lv.energy == 0.0) has_ground = true;
    if (lv.energy < 0.0)
      fail(path, "level " + lv.label + ": energy below the ground level");
    // alkali valence electron: |L - 1/2| <= J <= L + 1/2
    const int J2 = lv.J.twice();
    if (J2 < std::abs(2 * lv.L - 1) || J2 > 2 * lv.L + 1)
      fail(path, "level " + lv.label + ": J inconsistent with L");
  }
  if (!has_ground) fail(path, "no level at energy 0 (ground reference)");

  const int I2 = atom.nuclear_spin.twice();
  for (const auto& [idx, shifts] : atom.hyperfine) {
    const auto& lv = atom.fine_levels.at(idx);
    int prev_F2 = -1;
    for (const auto& hs : shifts) {
      const int F2 = hs.F.twice();
      if (F2 < std::abs(I2 - lv.J.twice()) || F2 > I2 + lv.J.twice())
        fail(path, "level " + lv.label + ": F=" +
                       std::to_string(0.5 * F2) + " violates |I-J|<=F<=I+J");
      if (F2 <= prev_F2)
        fail(path, "level " + lv.label + ": hyperfine shifts not strictly ordered in F");
      prev_F2 = F2;
    }
  }

  for (const auto& line : atom.lines) {
    if (line.lower < 0 || line.lower >= static_cast<int>(atom.fine_levels.size()) ||
        line.upper < 0 || line.upper >= static_cast<int>(atom.fine_levels.size()))
      fail(path, "line references undeclared level");
    if (line.reduced_element <= 0.0) fail(path, "reduced_element must be positive");
    if (line.lifetime <= 0.0) fail(path, "lifetime must be positive");
    // guard against unit errors: decay rate from the reduced element must
    // reproduce the quoted lifetime to 5%
    const double gamma = decay_rate_from_line(atom, line);
    const double rel = std::abs(gamma * line.lifetime - 1.0);
    if (rel > 0.05) {
      std::ostringstream os;
      os << "line " << atom.fine_levels[line.lower].label << " -> "
         << atom.fine_levels[line.upper].label
         << ": reduced element and lifetime disagree by " << rel * 100.0
         << "% (decay rate " << gamma << " /s vs 1/lifetime "
         << 1.0 / line.lifetime << " /s)";
      fail(path, os.str());
    }
  }
}

}  // namespace

int AtomSpec::level_index(const std::string& label) const {
  for (size_t i = 0; i < fine_levels.size(); ++i)
    if (fine_levels[i].label == label) return static_cast<int>(i);
  throw AtomDataError("unknown level label '" + label + "'");
}

const FineLevel& AtomSpec::ground_level() const {
  for (const auto& lv : fine_levels)
    if (lv.energy == 0.0) return lv;
  throw AtomDataError("no ground level");
}

const TransitionLine& AtomSpec::line_between(int lower, int upper) const {
  for (const auto& line : lines)
    if (line.lower == lower && line.upper == upper) return line;
  throw AtomDataError("no line between requested levels");
}

AtomSpec load_atom_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw AtomDataError(path + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(path, std::string("JSON parse error: ") + e.what());
  }

  AtomSpec atom;
  try {
    atom.species = doc.at("species").get<std::string>();
    atom.mass = doc.at("mass_kg").get<double>();
    atom.nuclear_spin =
        HalfInteger::from_twice(doc.at("nuclear_spin_2x").get<int>());

    for (const auto& jl : doc.at("levels")) {
      FineLevel lv;
      lv.label = jl.at("label").get<std::string>();
      lv.L = jl.at("L").get<int>();
      lv.J = HalfInteger::from_twice(jl.at("J_2x").get<int>());
      lv.energy =
          to_angular_frequency(jl.at("energy"), path, "level " + lv.label);
      atom.fine_levels.push_back(lv);
    }

    for (const auto& [label, arr] : doc.at("hyperfine").items()) {
      const int idx = atom.level_index(label);
      std::vector<HyperfineShift> shifts;
      for (const auto& js : arr) {
        HyperfineShift hs;
        hs.F = HalfInteger::from_twice(js.at("F_2x").get<int>());
        hs.shift = to_angular_frequency(js.at("shift"), path,
                                        "hyperfine of " + label);
        shifts.push_back(hs);
      }
      atom.hyperfine[idx] = shifts;
    }

    for (const auto& jl : doc.at("lines")) {
      TransitionLine line;
      line.lower = atom.level_index(jl.at("lower").get<std::string>());
      line.upper = atom.level_index(jl.at("upper").get<std::string>());
      line.reduced_element =
          to_dipole_length(jl.at("reduced_element"), path, "line");
      line.lifetime = to_seconds(jl.at("lifetime"), path, "line");
      atom.lines.push_back(line);
    }
  } catch (const json::exception& e) {
    fail(path, std::string("schema violation: ") + e.what());
  }

  validate(atom, path);
  return atom;
}

void save_atom_spec(const AtomSpec& atom, const std::string& path) {
  json doc;
  doc["species"] = atom.species;
  doc["mass_kg"] = atom.mass;
  doc["nuclear_spin_2x"] = atom.nuclear_spin.twice();
  doc["levels"] = json::array();
  for (const auto& lv : atom.fine_levels) {
    doc["levels"].push_back({{"label", lv.label},
                             {"L", lv.L},
                             {"J_2x", lv.J.twice()},
                             {"energy", {{"value", lv.energy}, {"unit", "rad/s"}}}});
  }
  doc["hyperfine"] = json::object();
  for (const auto& [idx, shifts] : atom.hyperfine) {
    json arr = json::array();
    for (const auto& hs : shifts)
      arr.push_back({{"F_2x", hs.F.twice()},
                     {"shift", {{"value", hs.shift}, {"unit", "rad/s"}}}});
    doc["hyperfine"][atom.fine_levels[idx].label] = arr;
  }
  doc["lines"] = json::array();
  for (const auto& line : atom.lines) {
    doc["lines"].push_back(
        {{"lower", atom.fine_levels[line.lower].label},
         {"upper", atom.fine_levels[line.upper].label},
         {"reduced_element", {{"value", line.reduced_element}, {"unit", "m"}}},
         {"lifetime", {{"value", line.lifetime}, {"unit", "s"}}}});
  }
  std::ofstream out(path);
  if (!out) throw AtomDataError(path + ": cannot open for writing");
  out << doc.dump(2) << "\n";
}

std::vector<Sublevel> sublevels(const AtomSpec& atom, int level_index) {
  const auto& lv = atom.fine_levels.at(level_index);
  auto it = atom.hyperfine.find(level_index);
  if (it == atom.hyperfine.end())
    throw AtomDataError("level " + lv.label + " has no hyperfine data");
  std::vector<Sublevel> out;
  for (const auto& hs : it->second) {
    for (int m2 = -hs.F.twice(); m2 <= hs.F.twice(); m2 += 2) {
      Sublevel s;
      s.fine = level_index;
      s.F = hs.F;
      s.m_F = HalfInteger::from_twice(m2);
      s.absolute_energy = lv.energy + hs.shift;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<Sublevel> sublevels(const AtomSpec& atom, const FineLevel& fine) {
  return sublevels(atom, atom.level_index(fine.label));
}

double dipole_element(const AtomSpec& atom, const Sublevel& lower,
                      const Sublevel& upper, int q) {
  const TransitionLine* line = nullptr;
  for (const auto& l : atom.lines)
    if (l.lower == lower.fine && l.upper == upper.fine) {
      line = &l;
      break;
    }
  if (!line) return 0.0;
  return hyperfine_dipole_element(
      lower.F, lower.m_F, atom.fine_levels[lower.fine].J, upper.F, upper.m_F,
      atom.fine_levels[upper.fine].J, q, line->reduced_element,
      atom.nuclear_spin);
}

double decay_rate_from_line(const AtomSpec& atom, const TransitionLine& line) {
  namespace cst = constants;
  const auto& lo = atom.fine_levels[line.lower];
  const auto& up = atom.fine_levels[line.upper];
  const double omega = up.energy - lo.energy;
  const double x2 = line.reduced_element * line.reduced_element;
  const double g_ratio =
      static_cast<double>(lo.J.twice() + 1) / (up.J.twice() + 1);
  return cst::e_charge * cst::e_charge * omega * omega * omega * g_ratio * x2 /
         (3.0 * cst::pi * cst::eps0 * cst::hbar * cst::c_light * cst::c_light *
          cst::c_light);
}

}  // namespace latqc
