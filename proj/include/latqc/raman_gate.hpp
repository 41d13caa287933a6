#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "latqc/lattice.hpp"

// Raman two-photon single-qubit gate: the rotation matrix, the
// state-averaged pi-pulse fidelity, and the per-mechanism gate errors.
// Pulse-angle conventions differ by mechanism: p_pulse_area is for
// a pi/2 gate, the other mechanisms for a pi gate, and the total sums them
// as-is.
namespace latqc {

struct RamanGateConfig {
  std::complex<double> Omega_R{0.0, 0.0};  // two-photon Rabi frequency, rad/s
  double Delta_1 = 0.0;  // single-photon detunings, rad/s
  double Delta_2 = 0.0;
  double Delta = 0.0;      // two-photon detuning, rad/s
  double t = 0.0;          // pulse duration, s
  double w0 = 0.0;         // Raman beam waist, m
  double lambda_R = 894e-9;  // Raman wavelength, m
  double P_R = 0.0;        // total Raman beam power, W
  double eta = 0.5;        // stabilization detector quantum efficiency
  double tau = 34.9e-9;    // excited-state lifetime, s

  void validate() const {
    if (w0 <= 0.0 || t < 0.0 || tau <= 0.0)
      throw std::invalid_argument("w0, t, tau must be positive");
    if (!(eta > 0.0 && eta <= 1.0))
      throw std::invalid_argument("need 0 < eta <= 1");
  }
};

struct MotionalState {
  int n_x = 0;
  int n_y = 0;
  void validate() const {
    if (n_x < 0 || n_y < 0)
      throw std::invalid_argument("motional quantum numbers must be >= 0");
  }
};

// |Omega_R| from the Raman beam intensity and single-photon detuning,
// |Omega_R| = (8.3e12 W^-1 m^2 s^-2) I / |Delta_1|
inline constexpr double rabi_intensity_constant = 8.3e12;  // W^-1 m^2 s^-2

// differential-light-shift ratio (delta U_1 - delta U_0)/(hbar Omega_R)
// ~ (-6e10 s^-1)/Delta_1, an empirical fit valid for
// 50 GHz < Delta_1/2pi < 5000 GHz
inline constexpr double stark_shift_ratio_constant = 6.0e10;  // s^-1

// Raman transition frequency used by the shot-noise bound
inline constexpr double raman_transition_omega = 2.0 * 3.14159265358979323846 * 3.5e14;

// general rotation for two-photon detuning Delta; reduces to
// R(theta, phi) with theta = |Omega_R| t, phi = arg(Omega_R) at Delta = 0
Eigen::Matrix2cd rotation_matrix(std::complex<double> Omega_R, double Delta,
                                 double t);

// initial-state-averaged fidelity of R(theta, phi) against a pi pulse:
// 1/2 + (1/6)(cos 2phi - 2 cos theta cos^2 phi)
double averaged_pi_fidelity(double theta, double phi);

// |Omega_R| from intensity; warns when |Omega_R| is not << |Delta_1|
double rabi_from_intensity(double intensity, double Delta_1,
                           std::vector<std::string>* warnings = nullptr);

// a config with Omega_R tied to the beam power at P_R = P through
// I = 2 P / (pi w0^2) and the intensity relation; t set to the pi time
RamanGateConfig gate_config_from_power(double P_R, double w0, double Delta_1,
                                       std::vector<std::string>* warnings = nullptr);

// residual rotation of the four neighbor atoms on the beam axes
double p_neighbor(const RamanGateConfig& cfg, const LatticeConfig& lattice);

// spontaneous emission during a pi pulse, pi/(2 |Delta_1| tau)
double p_spontaneous(const RamanGateConfig& cfg,
                     std::vector<std::string>* warnings = nullptr);

// differential AC Stark phase variance from atomic motion
double p_ac_stark(const RamanGateConfig& cfg, const LatticeConfig& lattice,
                  double mass, const MotionalState& motional = {},
                  std::vector<std::string>* warnings = nullptr);

// pulse-area variance from motion across the beam profile (pi/2 gate)
double p_pulse_area(const RamanGateConfig& cfg, const LatticeConfig& lattice,
                    double mass, const MotionalState& motional = {});

// two-photon detuning variance from Doppler shifts
double p_doppler(const RamanGateConfig& cfg, const LatticeConfig& lattice,
                 double mass, const MotionalState& motional = {});

// leakage through the longitudinal polarization component of the focused
// beam; ground-state closed form hbar lambda^2 a / (pi w0^4 sqrt(2 m U_L))
double p_polarization(const RamanGateConfig& cfg, const LatticeConfig& lattice,
                      double mass, const MotionalState& motional = {});

// shot-noise floor on intensity-stabilization error; at eta = 0.5 this is
// the (2.6e-6 m^2/s) / (|Delta_1| w0^2) closed form
double p_shot_noise(const RamanGateConfig& cfg);

struct RamanEpgBreakdown {
  double neighbor = 0.0;
  double spontaneous = 0.0;
  double ac_stark = 0.0;
  double pulse_area = 0.0;
  double doppler = 0.0;
  double polarization = 0.0;
  double shot_noise = 0.0;
  std::vector<std::string> warnings;

  double total() const {
    return neighbor + spontaneous + ac_stark + pulse_area + doppler +
           polarization + shot_noise;
  }
};

// all gate-error mechanisms summed as independent probabilities; storage
// errors are accounted separately (lattice/budget modules)
RamanEpgBreakdown total_raman_epg(const RamanGateConfig& cfg,
                                  const LatticeConfig& lattice, double mass,
                                  const MotionalState& motional = {});

}  // namespace latqc
