#include "latqc/lattice.hpp"

#include <cmath>

#include "latqc/constants.hpp"

namespace latqc {

namespace cst = constants;

double lattice_potential(const LatticeConfig& cfg, double x) {
  return 0.5 * cfg.U_L * std::cos(2.0 * cst::pi * x / cfg.a);
}

double trap_frequency(const LatticeConfig& cfg, double mass) {
  return (cst::pi / cfg.a) * std::sqrt(2.0 * cfg.U_L / mass);
}

double depth_from_field(double E0_sq, double alpha) {
  if (alpha == 0.0) throw ZeroPolarizabilityError("polarizability is zero");
  return 0.25 * E0_sq * std::abs(alpha);
}

double field_from_depth(double U_L, double alpha) {
  if (alpha == 0.0) throw ZeroPolarizabilityError("polarizability is zero");
  return 4.0 * U_L / std::abs(alpha);
}

double mean_square_field(const LatticeConfig& cfg, double mass, double E0_sq) {
  if (cfg.detuning_side == DetuningSide::red) return E0_sq;
  const double w_tau = trap_frequency(cfg, mass);
  return cst::hbar * cst::pi * cst::pi /
         (2.0 * cfg.a * cfg.a * mass * w_tau) * E0_sq;
}

namespace {

double scatter_rate_for_sigma(const LatticeConfig& cfg, const AtomSpec& atom,
                              double sigma, double alpha) {
  const double omega_L = 2.0 * cst::pi * cst::c_light / cfg.lambda_L;
  if (cfg.detuning_side == DetuningSide::blue) {
    return cst::pi * cst::c_light * cst::eps0 / (cfg.a * omega_L) *
           std::sqrt(cfg.U_L / (2.0 * atom.mass)) * sigma / std::abs(alpha);
  }
  return 2.0 * cst::c_light * cst::eps0 / (cst::hbar * omega_L) * cfg.U_L *
         sigma / std::abs(alpha);
}

}  // namespace

double storage_scatter_rate(const LatticeConfig& cfg, const AtomSpec& atom,
                            const Sublevel& qubit_state, Polarization eps_in,
                            const ResponseOptions& opt) {
  cfg.validate();
  const double omega_L = 2.0 * cst::pi * cst::c_light / cfg.lambda_L;
  const double sigma = raman_cross_section(atom, qubit_state, omega_L, eps_in, opt);
  const double alpha = polarizability(atom, qubit_state, omega_L, eps_in, opt);
  return scatter_rate_for_sigma(cfg, atom, sigma, alpha);
}

double total_scatter_rate(const LatticeConfig& cfg, const AtomSpec& atom,
                          const Sublevel& qubit_state, Polarization eps_in,
                          const ResponseOptions& opt) {
  cfg.validate();
  const double omega_L = 2.0 * cst::pi * cst::c_light / cfg.lambda_L;
  const double sigma =
      raman_cross_section(atom, qubit_state, omega_L, eps_in, opt) +
      rayleigh_cross_section(atom, qubit_state, omega_L, eps_in, opt);
  const double alpha = polarizability(atom, qubit_state, omega_L, eps_in, opt);
  return scatter_rate_for_sigma(cfg, atom, sigma, alpha);
}

double storage_epg(double rate, const StorageContext& ctx) {
  ctx.validate();
  return rate * ctx.T_1 * ctx.N / ctx.n_A;
}

double lattice_power_required(const LatticeConfig& cfg, const AtomSpec& atom,
                              double beam_margin, const ResponseOptions& opt) {
  cfg.validate();
  // intensity sets the depth, the beam must cover the lattice cross-section:
  // P ~ a^2 * sites^2 * U_L / |alpha(lambda_L)|, pinned to the 10 W anchor
  auto figure = [&](double a, int sites, double U_L, double lambda) {
    const double omega = 2.0 * cst::pi * cst::c_light / lambda;
    Sublevel ref;  // |F=3, mF=0> of the ground level
    for (const auto& s : sublevels(atom, atom.level_index("6S1/2")))
      if (s.F.twice() == 6 && s.m_F.twice() == 0) ref = s;
    const double alpha = polarizability(atom, ref, omega, Polarization(+1), opt);
    return a * a * sites * sites * U_L / std::abs(alpha);
  };
  const double anchor =
      figure(10e-6, 100, 500e-6 * cst::k_boltzmann, 851.7e-9);
  return beam_margin * 10.0 *
         figure(cfg.a, cfg.sites_per_axis, cfg.U_L, cfg.lambda_L) / anchor;
}

}  // namespace latqc
