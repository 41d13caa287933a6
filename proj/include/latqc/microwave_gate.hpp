#pragma once

#include <cmath>

#include "latqc/constants.hpp"
#include "latqc/lattice.hpp"

// Microwave-pulse single-qubit gate with a focused AC-Stark addressing
// beam: Gaussian beam model and the analytic error mechanisms. The gate
// dynamics themselves are simulated by the propagator module.
namespace latqc {

struct MicrowaveGateConfig {
  double Delta_ac = 2e5;     // addressing-beam AC Stark shift, 1/s (no 2pi)
  double w0 = 1.2e-6;        // addressing beam waist, m
  double lambda_M = 880e-9;  // addressing wavelength, m
  double T_1 = 76e-6;        // total gate time, s
  double Omega_1 = 41341.0;  // |2>-|3> transition strength, rad/s
  double Omega_2 = 41341.0 * 0.8660254037844386;  // sqrt(3)/2 * Omega_1
  double delta_T = 1e-10;    // pulse timing resolution, s
  double delta_x = 0.0;      // beam pointing error, m

  void validate() const {
    if (w0 <= 0.0 || T_1 <= 0.0)
      throw std::invalid_argument("w0 and T_1 must be positive");
  }
};

// config with Omega_2 pinned to (sqrt(3)/2) Omega_1 and T_1 = pi/Omega_1
MicrowaveGateConfig make_microwave_config(double Delta_ac, double w0,
                                          double lambda_M, double Omega_1,
                                          double delta_T = 1e-10,
                                          double delta_x = 0.0);

struct GaussianBeam {
  double w0 = 0.0;      // waist, m
  double lambda = 0.0;  // wavelength, m
  double I0 = 1.0;      // peak intensity (or normalized), W/m^2

  double rayleigh_length() const {
    return constants::pi * w0 * w0 / lambda;
  }
  double width(double z) const {
    const double zr = rayleigh_length();
    return w0 * std::sqrt(1.0 + z * z / (zr * zr));
  }
};

// I(r, z)/I0 = (w0^2/w^2(z)) exp(-2 r^2 / w^2(z)); normalized so the
// on-axis intensity decays away from the focus and I(0,0) = 1
double beam_intensity(const GaussianBeam& beam, double r, double z);

// generalized Rabi transition probability for coupling Omega (flip time
// pi/Omega on resonance) and detuning Delta after time t
double rabi_transition_probability(double Omega, double Delta, double t);

struct OffResonantResult {
  double per_atom = 0.0;     // (pi delta_T / 2 T_1)^2
  double aggregated = 0.0;   // times N / n_A
};
// off-resonant transitions of non-target atoms from the global pulses,
// with the null condition Delta = sqrt(3) Omega_1 assumed
OffResonantResult p_off_resonant(const MicrowaveGateConfig& cfg,
                                 const StorageContext& ctx);

// gate error for an atom z away from the beam focus along the axis,
// ~ (9 pi^2/16) (z/z_R)^8, capped at 1 ("order unity")
double axial_addressing_error(const MicrowaveGateConfig& cfg, double z);

// heating to the first even vibrational state from the curvature mismatch
// of the shifted |2>/|3> potentials
double p_heating(const MicrowaveGateConfig& cfg, const LatticeConfig& lattice,
                 double mass);
// the unsimplified generalized-Rabi form of the same probability
double p_heating_rabi(const MicrowaveGateConfig& cfg,
                      const LatticeConfig& lattice, double mass);

// addressing-beam Raman scattering during the gate, with the empirical
// rate constant Gamma/hbar = 3.4e-6 * Delta_ac
inline constexpr double addressing_scatter_constant = 3.4e-6;
double p_scatter(const MicrowaveGateConfig& cfg);
// same coefficient re-derived from the response module at lambda_M,
// averaged over the two shifted auxiliary states
double addressing_scatter_coefficient(const MicrowaveGateConfig& cfg,
                                      const AtomSpec& atom,
                                      const ResponseOptions& opt = {});

// transition-probability loss when the beam is off target by delta_x
double p_position_detuning(const MicrowaveGateConfig& cfg);

enum class GateLegs { single, full_gate };
// motional excitation from the displaced-beam potential gradient; the
// full gate sums the three legs with delta_x -> 2 delta_x on the
// |2>-|3> leg
double p_position_heating(const MicrowaveGateConfig& cfg,
                          const LatticeConfig& lattice, double mass,
                          GateLegs legs);

struct MicrowaveEpgBreakdown {
  double off_resonant = 0.0;      // aggregated over the lattice
  double heating = 0.0;
  double scatter = 0.0;
  double position_detuning = 0.0;
  double position_heating = 0.0;  // full gate
  double storage = 0.0;           // reported alongside, not in the total

  double total() const {
    return off_resonant + heating + scatter + position_detuning +
           position_heating;
  }
};

MicrowaveEpgBreakdown total_microwave_epg(const MicrowaveGateConfig& cfg,
                                          const LatticeConfig& lattice,
                                          double mass,
                                          const StorageContext& ctx);

}  // namespace latqc
