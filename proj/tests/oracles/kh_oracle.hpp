#pragma once

// Deliberately naive direct-sum evaluation of the Kramers-Heisenberg cross
// section and the dynamic polarizability: fresh factorial-sum angular
// factors per term, no caching, no helpers shared with src/response.cpp.
#include <cmath>
#include <vector>

#include "latqc/atomic_data.hpp"
#include "latqc/constants.hpp"
#include "oracles/wigner_oracle.hpp"

namespace kh_oracle {

// <g| x.eps_q* |e> in meters, via the oracle's own Racah sums
inline double element(const latqc::AtomSpec& atom, const latqc::Sublevel& g,
                      const latqc::Sublevel& e, int q) {
  double reduced = 0.0;
  for (const auto& line : atom.lines)
    if (line.lower == g.fine && line.upper == e.fine) reduced = line.reduced_element;
  if (reduced == 0.0) return 0.0;
  return static_cast<double>(wigner_oracle::dipole_element(
      g.F.twice(), g.m_F.twice(), atom.fine_levels[g.fine].J.twice(),
      e.F.twice(), e.m_F.twice(), atom.fine_levels[e.fine].J.twice(), q,
      reduced, atom.nuclear_spin.twice()));
}

inline std::vector<latqc::Sublevel> intermediates(const latqc::AtomSpec& atom,
                                                  int ground) {
  std::vector<latqc::Sublevel> out;
  for (const auto& line : atom.lines) {
    if (line.lower != ground) continue;
    for (const auto& s : latqc::sublevels(atom, line.upper)) out.push_back(s);
  }
  return out;
}

inline double sigma_ab(const latqc::AtomSpec& atom, const latqc::Sublevel& a,
                       const latqc::Sublevel& b, double omega, int q) {
  namespace cst = latqc::constants;
  const double omega_p = omega - (b.absolute_energy - a.absolute_energy);
  if (omega_p <= 0.0) return 0.0;
  double total = 0.0;
  for (int qp = -1; qp <= 1; ++qp) {
    double amp = 0.0;
    for (const auto& i : intermediates(atom, a.fine)) {
      const double w_ia = i.absolute_energy - a.absolute_energy;
      amp += element(atom, a, i, q) * element(atom, b, i, qp) / (w_ia - omega);
      amp += (((q + qp) % 2 == 0) ? 1.0 : -1.0) * element(atom, b, i, -q) *
             element(atom, a, i, -qp) / (w_ia + omega_p);
    }
    total += amp * amp;
  }
  return (8.0 * cst::pi / 3.0) * cst::alpha_fs * cst::alpha_fs * omega *
         omega_p * omega_p * omega_p /
         (cst::c_light * cst::c_light) * total;
}

inline double sigma_raman(const latqc::AtomSpec& atom, const latqc::Sublevel& a,
                          double omega, int q) {
  double sum = 0.0;
  for (const auto& b : latqc::sublevels(atom, a.fine)) {
    if (b.F.twice() == a.F.twice() && b.m_F.twice() == a.m_F.twice()) continue;
    sum += sigma_ab(atom, a, b, omega, q);
  }
  return sum;
}

inline double alpha(const latqc::AtomSpec& atom, const latqc::Sublevel& a,
                    double omega, int q) {
  namespace cst = latqc::constants;
  double sum = 0.0;
  for (const auto& i : intermediates(atom, a.fine)) {
    const double w_ia = i.absolute_energy - a.absolute_energy;
    const double m_res = element(atom, a, i, q);
    const double m_anti = element(atom, a, i, -q);
    sum += m_res * m_res / (w_ia - omega) + m_anti * m_anti / (w_ia + omega);
  }
  return cst::e_charge * cst::e_charge / cst::hbar * sum;
}

}  // namespace kh_oracle
