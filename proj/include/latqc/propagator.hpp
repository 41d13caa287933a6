#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "latqc/lattice.hpp"
#include "latqc/microwave_gate.hpp"

// Pseudo-spectral quantum dynamics: multi-level wavefunctions on a spatial
// grid, the Schroedinger propagator expanded in Chebychev polynomials with
// the kinetic action applied in momentum space, dressed-state couplings,
// and the microwave pi-gate built on top of it.
namespace latqc {

struct ToleranceUnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GridUnderresolvedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GridTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpatialGrid {
  int n_points = 512;   // per axis; power of two, >= 16
  double length = 0.0;  // per axis, m
  int dimensions = 1;   // 1 or 2

  double spacing() const { return length / n_points; }
  int total_points() const {
    return dimensions == 1 ? n_points : n_points * n_points;
  }
  double volume_element() const {
    const double dx = spacing();
    return dimensions == 1 ? dx : dx * dx;
  }
  // coordinate of index i along one axis, centered on 0
  double coord(int i) const { return (i - n_points / 2) * spacing(); }

  void validate() const {
    if (n_points < 16 || (n_points & (n_points - 1)) != 0)
      throw std::invalid_argument("n_points must be a power of two >= 16");
    if (length <= 0.0) throw std::invalid_argument("grid length must be positive");
    if (dimensions != 1 && dimensions != 2)
      throw std::invalid_argument("dimensions must be 1 or 2");
  }
};

struct MultiLevelWavefunction {
  int levels = 0;
  SpatialGrid grid;
  std::vector<std::complex<double>> amp;  // [levels][points], row-major

  static MultiLevelWavefunction zero(int levels, const SpatialGrid& grid);

  std::complex<double>* level(int l) { return amp.data() + static_cast<size_t>(l) * grid.total_points(); }
  const std::complex<double>* level(int l) const {
    return amp.data() + static_cast<size_t>(l) * grid.total_points();
  }

  double norm_sq() const;
  void normalize();
  // sum over levels of |psi|^2 integrated, per level
  std::vector<double> level_populations() const;
  std::complex<double> inner(const MultiLevelWavefunction& other) const;
};

// One driven transition in the rotating frame. The coupling enters the
// Hamiltonian as (hbar rabi / 2)(|i><j| + |j><i|); the detuning adds
// hbar*detuning to the diagonal of level j. Builders that fold all frame
// offsets into the potentials set detuning = 0.
struct Coupling {
  int i = 0;
  int j = 0;
  double rabi = 0.0;      // rad/s
  double detuning = 0.0;  // rad/s
};

struct DressedHamiltonian {
  std::vector<std::vector<double>> potentials;  // [levels][points], J
  std::vector<Coupling> couplings;
  double mass = 0.0;  // kg

  int levels() const { return static_cast<int>(potentials.size()); }
  void validate(const SpatialGrid& grid) const;
};

struct SpectralBounds {
  double e_min = 0.0;
  double e_max = 0.0;
};

// Conservative eigenvalue bounds: potential range plus the kinetic cutoff
// plus a Gershgorin bound on the coupling block.
SpectralBounds spectral_range(const DressedHamiltonian& h,
                              const SpatialGrid& grid);

struct PropagateOptions {
  double tolerance = 1e-10;  // Chebychev tail bound
  int max_order = 100000;    // per segment; subdivision beyond this
  int max_subdivisions = 24;
};

// psi(t + dt) = exp(-i H dt / hbar) psi(t). Deterministic; dt may be
// negative (time reversal). Throws GridUnderresolvedError when the kinetic
// cutoff does not dominate the potential/coupling scale, and
// ToleranceUnreachableError when subdivision cannot reach the tolerance.
MultiLevelWavefunction propagate(const MultiLevelWavefunction& psi,
                                 const DressedHamiltonian& h, double dt,
                                 const PropagateOptions& opt = {});

// Dense matrix exponential of the full discretized Hamiltonian; the
// verification oracle, feasible only for levels*points <= 1024.
MultiLevelWavefunction oracle_propagate(const MultiLevelWavefunction& psi,
                                        const DressedHamiltonian& h,
                                        double dt);

// Lowest eigenstate of the single-level Hamiltonian with the same spectral
// kinetic operator the propagator applies (dense diagonalization).
std::vector<std::complex<double>> ground_state(const SpatialGrid& grid,
                                               const std::vector<double>& potential,
                                               double mass);

struct PulseSegment {
  double duration = 0.0;  // s
  DressedHamiltonian hamiltonian;
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;
  double total_duration() const;
};

struct GateSetup {
  PulseSchedule schedule;
  MultiLevelWavefunction psi0;
  MultiLevelWavefunction target;
  double trap_frequency = 0.0;  // harmonic approximation at the well, rad/s
  double mass = 0.0;
};

// The four-level microwave pi gate: |0>,|1> see the lattice well, |2>,|3>
// additionally the +-hbar*Delta_ac addressing-beam shift, drives resonant
// at the beam-center-shifted frequencies (frame offsets folded into the
// potentials), couplings Omega_2, Omega_2, Omega_1 on 0-2, 1-3, 2-3. The
// atom starts in |0> x motional ground state of the well; delta_x displaces
// the beam from the well center. When simultaneous = false the three legs
// run sequentially (0-2, 2-3, 3-1), each for a third of the gate time.
GateSetup build_microwave_gate(const LatticeConfig& lattice,
                               const MicrowaveGateConfig& gate,
                               const SpatialGrid& grid, double mass,
                               double delta_x, bool simultaneous = true);

struct Snapshot {
  double t = 0.0;
  MultiLevelWavefunction psi;
};

struct SimulateOptions {
  PropagateOptions prop;
  std::vector<double> snapshot_times;  // s, within the schedule
  int n_proj = 8;  // harmonic levels kept by the motional projector
};

struct GateResult {
  double error = 0.0;  // 1 - |<target|psi_final>|^2
  std::vector<double> level_populations;
  std::vector<double> motional_populations;  // vs harmonic level n
  double motional_excited_population = 0.0;  // 1 - ground-level fraction
  double final_norm_sq = 0.0;
  double edge_population = 0.0;  // density in the outermost cells
  std::vector<Snapshot> snapshots;
};

GateResult simulate_gate(const GateSetup& setup,
                         const SimulateOptions& opt = {});

// per-level |psi(x)|^2 as CSV: x_m,level0,...,levelN (1D snapshots)
void write_snapshot_csv(const std::string& path,
                        const MultiLevelWavefunction& psi);

// harmonic-oscillator eigenfunction n sampled on the grid (1D), unit norm
std::vector<double> harmonic_eigenstate(const SpatialGrid& grid, double mass,
                                        double omega, int n, double center = 0.0);

}  // namespace latqc
