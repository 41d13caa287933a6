#include "latqc/raman_gate.hpp"

#include <cmath>

#include "latqc/constants.hpp"

namespace latqc {

namespace cst = constants;

Eigen::Matrix2cd rotation_matrix(std::complex<double> Omega_R, double Delta,
                                 double t) {
  const double mag = std::abs(Omega_R);
  const double Omega_p = std::sqrt(mag * mag + Delta * Delta);
  Eigen::Matrix2cd R;
  if (Omega_p == 0.0 || t == 0.0) {
    R.setIdentity();
    return R;
  }
  const std::complex<double> i(0.0, 1.0);
  const double half = 0.5 * Omega_p * t;
  const double c = std::cos(half);
  const double s = std::sin(half);
  const std::complex<double> phase = std::exp(i * (0.5 * Delta * t));
  R(0, 0) = phase * (c - i * (Delta / Omega_p) * s);
  R(0, 1) = i * phase * (std::conj(Omega_R) / Omega_p) * s;
  R(1, 0) = i * std::conj(phase) * (Omega_R / Omega_p) * s;
  R(1, 1) = std::conj(phase) * (c + i * (Delta / Omega_p) * s);
  return R;
}

double averaged_pi_fidelity(double theta, double phi) {
  const double c = std::cos(phi);
  return 0.5 + (std::cos(2.0 * phi) - 2.0 * std::cos(theta) * c * c) / 6.0;
}

double rabi_from_intensity(double intensity, double Delta_1,
                           std::vector<std::string>* warnings) {
  const double omega = rabi_intensity_constant * intensity / std::abs(Delta_1);
  if (warnings && omega > 0.1 * std::abs(Delta_1))
    warnings->push_back("|Omega_R| is not small against |Delta_1|; the "
                        "adiabatic-elimination Rabi relation degrades");
  return omega;
}

RamanGateConfig gate_config_from_power(double P_R, double w0, double Delta_1,
                                       std::vector<std::string>* warnings) {
  RamanGateConfig cfg;
  cfg.P_R = P_R;
  cfg.w0 = w0;
  cfg.Delta_1 = Delta_1;
  cfg.Delta_2 = Delta_1;
  const double intensity = 2.0 * P_R / (cst::pi * w0 * w0);
  cfg.Omega_R = rabi_from_intensity(intensity, Delta_1, warnings);
  cfg.t = cst::pi / std::abs(cfg.Omega_R);
  return cfg;
}

double p_neighbor(const RamanGateConfig& cfg, const LatticeConfig& lattice) {
  const double a = lattice.a, w0 = cfg.w0, lam = cfg.lambda_R;
  const double shape = 1.0 + a * a * lam * lam /
                                 (cst::pi * cst::pi * w0 * w0 * w0 * w0);
  return (2.0 * cst::pi * cst::pi / 3.0) / (shape * shape) *
         std::exp(-4.0 * a * a / (w0 * w0));
}

double p_spontaneous(const RamanGateConfig& cfg,
                     std::vector<std::string>* warnings) {
  if (cfg.Delta_1 == 0.0)
    throw std::invalid_argument("Delta_1 = 0 diverges");
  if (warnings && std::abs(cfg.Omega_R) > 0.1 * std::abs(cfg.Delta_1))
    warnings->push_back("spontaneous-emission estimate assumes |Omega_R| << |Delta_1|");
  return cst::pi / (2.0 * std::abs(cfg.Delta_1) * cfg.tau);
}

namespace {

double motional_bracket(const MotionalState& n) {
  n.validate();
  auto term = [](int k) { return static_cast<double>(k) * k + k + 1; };
  return term(n.n_x) + term(n.n_y);
}

// hbar^2 a^2 / (pi^2 m U_L w0^4), the shared beam-profile variance scale
double profile_variance_scale(const RamanGateConfig& cfg,
                              const LatticeConfig& lattice, double mass) {
  const double w2 = cfg.w0 * cfg.w0;
  return cst::hbar * cst::hbar * lattice.a * lattice.a /
         (cst::pi * cst::pi * mass * lattice.U_L * w2 * w2);
}

}  // namespace

double p_ac_stark(const RamanGateConfig& cfg, const LatticeConfig& lattice,
                  double mass, const MotionalState& motional,
                  std::vector<std::string>* warnings) {
  const double d1 = std::abs(cfg.Delta_1) / (2.0 * cst::pi);
  if (warnings && (d1 < 50e9 || d1 > 5000e9))
    warnings->push_back("differential-Stark ratio extrapolated outside its "
                        "50 GHz < Delta_1/2pi < 5000 GHz validity range");
  const double ratio = stark_shift_ratio_constant / cfg.Delta_1;
  const double var = profile_variance_scale(cfg, lattice, mass) * ratio *
                     ratio * motional_bracket(motional);
  return 2.0 / 3.0 * var;
}

double p_pulse_area(const RamanGateConfig& cfg, const LatticeConfig& lattice,
                    double mass, const MotionalState& motional) {
  const double var = profile_variance_scale(cfg, lattice, mass) *
                     (cst::pi / 2.0) * (cst::pi / 2.0) *
                     motional_bracket(motional);
  return var / 6.0;
}

double p_doppler(const RamanGateConfig& cfg, const LatticeConfig& lattice,
                 double mass, const MotionalState& motional) {
  motional.validate();
  const double w_tau = trap_frequency(lattice, mass);
  const double k = 2.0 * cst::pi / cfg.lambda_R;
  const double var = k * k * (cst::hbar * w_tau / mass) *
                     (motional.n_x + motional.n_y + 1);
  const double prefactor = (8.0 - 4.0 * cst::pi + cst::pi * cst::pi) / 24.0;
  const double om2 = std::norm(cfg.Omega_R);
  return prefactor * var / om2;
}

double p_polarization(const RamanGateConfig& cfg, const LatticeConfig& lattice,
                      double mass, const MotionalState& motional) {
  motional.validate();
  const double w2 = cfg.w0 * cfg.w0;
  const double ground = cst::hbar * cfg.lambda_R * cfg.lambda_R * lattice.a /
                        (cst::pi * w2 * w2 *
                         std::sqrt(2.0 * mass * lattice.U_L));
  return ground * (motional.n_x + motional.n_y + 1);
}

double p_shot_noise(const RamanGateConfig& cfg) {
  // shot-noise bound on (delta I / I)^2 folded through the pi-gate
  // fidelity; Omega_R here is tied to I = P_R/(pi w0^2) per the
  // stabilized-beam derivation, independent of cfg.Omega_R
  const double intensity = cfg.P_R / (cst::pi * cfg.w0 * cfg.w0);
  const double omega_eq9 =
      rabi_intensity_constant * intensity / std::abs(cfg.Delta_1);
  const double t_pi = cst::pi / omega_eq9;
  return (2.0 * cst::pi * cst::pi / 3.0) * cst::hbar *
         raman_transition_omega / (cfg.eta * cfg.P_R * t_pi);
}

RamanEpgBreakdown total_raman_epg(const RamanGateConfig& cfg,
                                  const LatticeConfig& lattice, double mass,
                                  const MotionalState& motional) {
  cfg.validate();
  lattice.validate();
  RamanEpgBreakdown out;
  out.neighbor = p_neighbor(cfg, lattice);
  out.spontaneous = p_spontaneous(cfg, &out.warnings);
  out.ac_stark = p_ac_stark(cfg, lattice, mass, motional, &out.warnings);
  out.pulse_area = p_pulse_area(cfg, lattice, mass, motional);
  out.doppler = p_doppler(cfg, lattice, mass, motional);
  out.polarization = p_polarization(cfg, lattice, mass, motional);
  out.shot_noise = p_shot_noise(cfg);
  return out;
}

}  // namespace latqc
