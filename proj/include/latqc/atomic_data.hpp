#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "latqc/angular.hpp"

// Alkali-atom structure data: fine levels, hyperfine shifts, dipole lines.
// Loaded from a JSON file (schema in docs/atomic-data.md) and immutable
// afterwards; all stored quantities are SI (rad/s, m, kg, s).
namespace latqc {

struct AtomDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FineLevel {
  std::string label;  // e.g. "6S1/2"
  int L = 0;
  HalfInteger J;
  double energy = 0.0;  // rad/s relative to the ground fine level
};

struct HyperfineShift {
  HalfInteger F;
  double shift = 0.0;  // rad/s relative to the fine-level centroid
};

struct TransitionLine {
  int lower = 0;  // indices into AtomSpec::fine_levels
  int upper = 0;
  double reduced_element = 0.0;  // <J||x||J'> dipole length, m
  double lifetime = 0.0;         // s
};

struct Sublevel {
  int fine = 0;  // index into AtomSpec::fine_levels
  HalfInteger F;
  HalfInteger m_F;
  double absolute_energy = 0.0;  // rad/s
};

struct AtomSpec {
  std::string species;
  double mass = 0.0;  // kg
  HalfInteger nuclear_spin;
  std::vector<FineLevel> fine_levels;
  std::map<int, std::vector<HyperfineShift>> hyperfine;  // level index -> shifts
  std::vector<TransitionLine> lines;

  int level_index(const std::string& label) const;
  const FineLevel& ground_level() const;  // the level at energy 0
  // the line connecting `lower` and `upper`; throws if absent
  const TransitionLine& line_between(int lower, int upper) const;
};

// Load and validate an atomic data file. Schema violations, invariant
// violations and unknown unit tags raise AtomDataError with the offending
// path and context.
AtomSpec load_atom_spec(const std::string& path);

// Serialize in canonical SI units; load_atom_spec(save) round-trips
// field-for-field.
void save_atom_spec(const AtomSpec& atom, const std::string& path);

// All (F, mF) sublevels of one fine level, energies = level energy +
// hyperfine shift, ordered by (F, mF).
std::vector<Sublevel> sublevels(const AtomSpec& atom, const FineLevel& fine);
std::vector<Sublevel> sublevels(const AtomSpec& atom, int level_index);

// signed omega_i - omega_a in rad/s
inline double transition_frequency(const Sublevel& a, const Sublevel& i) {
  return i.absolute_energy - a.absolute_energy;
}

// Wigner-Eckart dipole matrix element between sublevels, using the reduced
// element of the line joining their fine levels (0 if no line joins them).
double dipole_element(const AtomSpec& atom, const Sublevel& lower,
                      const Sublevel& upper, int q);

// Spontaneous decay rate implied by a line's reduced element,
// 1/s; used for the lifetime-consistency check at load time.
double decay_rate_from_line(const AtomSpec& atom, const TransitionLine& line);

}  // namespace latqc
