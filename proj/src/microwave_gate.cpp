#include "latqc/microwave_gate.hpp"

#include <cmath>

#include "latqc/constants.hpp"
#include "latqc/response.hpp"

namespace latqc {

namespace cst = constants;

MicrowaveGateConfig make_microwave_config(double Delta_ac, double w0,
                                          double lambda_M, double Omega_1,
                                          double delta_T, double delta_x) {
  MicrowaveGateConfig cfg;
  cfg.Delta_ac = Delta_ac;
  cfg.w0 = w0;
  cfg.lambda_M = lambda_M;
  cfg.Omega_1 = Omega_1;
  cfg.Omega_2 = 0.5 * std::sqrt(3.0) * Omega_1;
  cfg.T_1 = cst::pi / Omega_1;
  cfg.delta_T = delta_T;
  cfg.delta_x = delta_x;
  cfg.validate();
  return cfg;
}

double beam_intensity(const GaussianBeam& beam, double r, double z) {
  const double w = beam.width(z);
  return (beam.w0 * beam.w0) / (w * w) * std::exp(-2.0 * r * r / (w * w));
}

double rabi_transition_probability(double Omega, double Delta, double t) {
  const double g = std::sqrt(Omega * Omega + Delta * Delta);
  if (g == 0.0) return 0.0;
  const double s = std::sin(0.5 * g * t);
  return Omega * Omega / (g * g) * s * s;
}

OffResonantResult p_off_resonant(const MicrowaveGateConfig& cfg,
                                 const StorageContext& ctx) {
  cfg.validate();
  ctx.validate();
  OffResonantResult out;
  const double x = 0.5 * cst::pi * cfg.delta_T / cfg.T_1;
  out.per_atom = x * x;
  out.aggregated = out.per_atom * ctx.N / ctx.n_A;
  return out;
}

double axial_addressing_error(const MicrowaveGateConfig& cfg, double z) {
  GaussianBeam beam{cfg.w0, cfg.lambda_M, 1.0};
  const double zr = beam.rayleigh_length();
  const double r8 = std::pow(z / zr, 8);
  return std::min(1.0, 9.0 * cst::pi * cst::pi / 16.0 * r8);
}

double p_heating(const MicrowaveGateConfig& cfg, const LatticeConfig& lattice,
                 double mass) {
  cfg.validate();
  const double a6 = std::pow(lattice.a, 6);
  const double w4 = std::pow(cfg.w0, 4);
  const double U3 = std::pow(lattice.U_L, 3);
  return cst::hbar * cst::hbar * cfg.Delta_ac * cfg.Delta_ac * mass * a6 /
         (64.0 * std::pow(cst::pi, 4) * cfg.T_1 * cfg.T_1 * U3 * w4);
}

double p_heating_rabi(const MicrowaveGateConfig& cfg,
                      const LatticeConfig& lattice, double mass) {
  const double w_tau = trap_frequency(lattice, mass);
  const double xi = 0.5 * std::sqrt(2.0) * cst::hbar * cfg.Delta_ac /
                    (mass * w_tau * w_tau * cfg.w0 * cfg.w0);
  // transition to the state 2 hbar omega_tau up, coupling Omega_1 xi
  return rabi_transition_probability(cfg.Omega_1 * xi, 2.0 * w_tau, cfg.T_1);
}

double p_scatter(const MicrowaveGateConfig& cfg) {
  return addressing_scatter_constant * cfg.Delta_ac * cfg.T_1;
}

double addressing_scatter_coefficient(const MicrowaveGateConfig& cfg,
                                      const AtomSpec& atom,
                                      const ResponseOptions& opt) {
  const double omega = 2.0 * cst::pi * cst::c_light / cfg.lambda_M;
  const Polarization ep(+1);
  double coeff = 0.0;
  int n = 0;
  for (const auto& s : sublevels(atom, atom.level_index("6S1/2"))) {
    const bool aux = (s.F.twice() == 6 || s.F.twice() == 8) && s.m_F.twice() == 2;
    if (!aux) continue;
    const double sigma = raman_cross_section(atom, s, omega, ep, opt);
    const double alpha = std::abs(polarizability(atom, s, omega, ep, opt));
    coeff += cfg.lambda_M * cst::eps0 * sigma / (cst::pi * alpha);
    ++n;
  }
  return coeff / n;
}

double p_position_detuning(const MicrowaveGateConfig& cfg) {
  const double r = cfg.delta_x * cfg.delta_x / (cfg.w0 * cfg.w0);
  return 4.0 / (cst::pi * cst::pi) * cfg.Delta_ac * cfg.Delta_ac * cfg.T_1 *
         cfg.T_1 * r * r;
}

double p_position_heating(const MicrowaveGateConfig& cfg,
                          const LatticeConfig& lattice, double mass,
                          GateLegs legs) {
  cfg.validate();
  const double single = std::sqrt(2.0) / std::pow(cst::pi, 3) * cst::hbar *
                        cfg.Delta_ac * cfg.Delta_ac * cfg.delta_x *
                        cfg.delta_x * std::pow(lattice.a, 5) *
                        std::pow(mass, 1.5) /
                        (cfg.T_1 * cfg.T_1 * std::pow(lattice.U_L, 2.5) *
                         std::pow(cfg.w0, 4));
  if (legs == GateLegs::single) return single;
  // |0>-|2| and |1>-|3> legs plus the |2>-|3> leg at doubled displacement
  // (the beam perturbation has opposite sign for |2> and |3>)
  return 2.0 * single + 4.0 * single;
}

MicrowaveEpgBreakdown total_microwave_epg(const MicrowaveGateConfig& cfg,
                                          const LatticeConfig& lattice,
                                          double mass,
                                          const StorageContext& ctx) {
  MicrowaveEpgBreakdown out;
  out.off_resonant = p_off_resonant(cfg, ctx).aggregated;
  out.heating = p_heating(cfg, lattice, mass);
  out.scatter = p_scatter(cfg);
  out.position_detuning = p_position_detuning(cfg);
  out.position_heating =
      p_position_heating(cfg, lattice, mass, GateLegs::full_gate);
  return out;
}

}  // namespace latqc
