#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "latqc/atomic_data.hpp"

// Optical response of a ground-manifold sublevel: Kramers-Heisenberg
// scattering cross sections (Raman/Rayleigh), dynamic polarizability,
// wavelength sweeps and the magic-wavelength search. Intermediate states
// are the sublevels of every fine level reachable from the ground level by
// a declared line (D1 and D2 for the bundled Cs data).
namespace latqc {

struct Polarization {
  int q = +1;  // spherical basis index, -1 / 0 / +1
  explicit Polarization(int q_) : q(q_) {
    if (q < -1 || q > 1)
      throw std::invalid_argument("polarization q must be -1, 0 or +1");
  }
};

// The cross-section and polarizability formulas have real denominators and
// diverge on resonance; evaluation refuses to run closer than
// resonance_window_linewidths natural linewidths to any intermediate state.
struct ResponseOptions {
  double resonance_window_linewidths = 100.0;
};

struct ResonanceProximityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoSignChangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResponsePoint {
  double omega = 0.0;           // rad/s
  double sigma_raman = 0.0;     // m^2
  double sigma_rayleigh = 0.0;  // m^2
  double alpha = 0.0;           // C^2 m^2 / J
};

// sigma_ab for scattering a -> b at incoming angular frequency omega with
// polarization eps_in, summed over scattered photon polarizations; m^2.
double cross_section(const AtomSpec& atom, const Sublevel& a,
                     const Sublevel& b, double omega, Polarization eps_in,
                     const ResponseOptions& opt = {});

// sum over ground-manifold b != a
double raman_cross_section(const AtomSpec& atom, const Sublevel& a,
                           double omega, Polarization eps_in,
                           const ResponseOptions& opt = {});

// per-final-state breakdown of the Raman sum, for the bit-flip vs leakage
// partition (final states with the other F value are bit flips when
// mF' = mF, otherwise leakage)
struct RamanChannel {
  Sublevel final_state;
  double sigma = 0.0;  // m^2
};
std::vector<RamanChannel> raman_channels(const AtomSpec& atom,
                                         const Sublevel& a, double omega,
                                         Polarization eps_in,
                                         const ResponseOptions& opt = {});

// sigma_aa
double rayleigh_cross_section(const AtomSpec& atom, const Sublevel& a,
                              double omega, Polarization eps_in,
                              const ResponseOptions& opt = {});

// dynamic polarizability of sublevel a, C^2 m^2 / J
double polarizability(const AtomSpec& atom, const Sublevel& a, double omega,
                      Polarization eps_in, const ResponseOptions& opt = {});

// root of alpha_plus(lambda) + alpha_minus(lambda) = 0 by bisection,
// resolved to 1e-4 nm; bracket in meters. Throws NoSignChangeError when the
// bracket does not straddle a root.
double find_magic_wavelength(const AtomSpec& atom, const Sublevel& s_plus,
                             const Sublevel& s_minus, Polarization eps_in,
                             double lambda_lo, double lambda_hi,
                             const ResponseOptions& opt = {});

// Uniform wavelength grid over [lambda_min, lambda_max]; points falling
// inside a resonance window are skipped (gaps), not errors.
std::vector<ResponsePoint> response_sweep(const AtomSpec& atom,
                                          const Sublevel& a,
                                          Polarization eps_in,
                                          double lambda_min, double lambda_max,
                                          int n_points,
                                          const ResponseOptions& opt = {});

// CSV with header lambda_nm,sigma_raman_m2,sigma_rayleigh_m2,alpha_SI
void write_sweep_csv(const std::string& path,
                     const std::vector<ResponsePoint>& points);

}  // namespace latqc
