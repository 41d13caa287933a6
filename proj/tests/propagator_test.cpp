#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "latqc/constants.hpp"
#include "latqc/propagator.hpp"

using namespace latqc;
namespace cst = latqc::constants;
using cplx = std::complex<double>;

namespace {
constexpr double kCsMass = 2.2069469514537e-25;

SpatialGrid grid1d(int n, double length) {
  SpatialGrid g;
  g.n_points = n;
  g.length = length;
  g.dimensions = 1;
  return g;
}

DressedHamiltonian free_particle(const SpatialGrid& g, double mass) {
  DressedHamiltonian h;
  h.mass = mass;
  h.potentials = {std::vector<double>(g.total_points(), 0.0)};
  return h;
}

MultiLevelWavefunction gaussian_packet(const SpatialGrid& g, double sigma,
                                       double center = 0.0) {
  auto psi = MultiLevelWavefunction::zero(1, g);
  for (int k = 0; k < g.total_points(); ++k) {
    const double x = g.coord(k) - center;
    psi.amp[k] = std::exp(-x * x / (4.0 * sigma * sigma));
  }
  psi.normalize();
  return psi;
}
}  // namespace

TEST_CASE("spectral range") {
  const auto g = grid1d(64, 1e-6);
  auto h = free_particle(g, kCsMass);

  SUBCASE("free particle: E_max is the kinetic cutoff") {
    const auto sb = spectral_range(h, g);
    const double k_edge = cst::pi / g.spacing();
    CHECK(sb.e_max == doctest::Approx(cst::hbar * cst::hbar * k_edge * k_edge /
                                      (2 * kCsMass))
                          .epsilon(1e-12));
    CHECK(sb.e_min == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("constant potential shifts both bounds") {
    const auto sb0 = spectral_range(h, g);
    const double c = 3.7e-28;
    for (auto& v : h.potentials[0]) v += c;
    const auto sb1 = spectral_range(h, g);
    CHECK(sb1.e_max - sb0.e_max == doctest::Approx(c).epsilon(1e-10));
    CHECK(sb1.e_min - sb0.e_min == doctest::Approx(c).epsilon(1e-10));
  }

  SUBCASE("gate Hamiltonian bounds are finite and ordered") {
    LatticeConfig lat;
    lat.a = 5e-6;
    lat.U_L = 200e-6 * cst::k_boltzmann;
    const auto gate = make_microwave_config(2e5, 1.2e-6, 880e-9, 41341.0);
    const auto setup = build_microwave_gate(lat, gate, grid1d(512, lat.a),
                                            kCsMass, 0.0);
    const auto sb =
        spectral_range(setup.schedule.segments[0].hamiltonian, grid1d(512, lat.a));
    CHECK(std::isfinite(sb.e_min));
    CHECK(std::isfinite(sb.e_max));
    CHECK(sb.e_max > sb.e_min);
  }
}

TEST_CASE("stationary state: harmonic ground state sits still for 10 periods") {
  const double omega = 1.0e5;
  const auto g = grid1d(64, 0.8e-6);
  DressedHamiltonian h;
  h.mass = kCsMass;
  h.potentials.resize(1);
  h.potentials[0].resize(g.total_points());
  for (int k = 0; k < g.total_points(); ++k) {
    const double x = g.coord(k);
    h.potentials[0][k] = 0.5 * kCsMass * omega * omega * x * x;
  }
  auto psi0 = MultiLevelWavefunction::zero(1, g);
  const auto gs = ground_state(g, h.potentials[0], kCsMass);
  std::copy(gs.begin(), gs.end(), psi0.level(0));

  const double T = 10.0 * 2.0 * cst::pi / omega;
  const auto psi = propagate(psi0, h, T);
  const double overlap = std::norm(psi0.inner(psi));
  CHECK(std::abs(overlap - 1.0) < 1e-8);
  CHECK(std::abs(psi.norm_sq() - 1.0) < 1e-9);
}

TEST_CASE("free Gaussian packet spreads by the analytic law") {
  const auto g = grid1d(512, 2.0e-6);
  const double sigma0 = 5.0e-8;
  auto psi = gaussian_packet(g, sigma0);
  const auto h = free_particle(g, kCsMass);

  const double t = 1.0e-5;
  const auto out = propagate(psi, h, t, {1e-12, 100000, 24});

  double var = 0.0;
  for (int k = 0; k < g.total_points(); ++k) {
    const double x = g.coord(k);
    var += x * x * std::norm(out.amp[k]);
  }
  var *= g.volume_element();
  const double spread = cst::hbar * t / (2.0 * kCsMass * sigma0 * sigma0);
  const double expected = sigma0 * sigma0 * (1.0 + spread * spread);
  CHECK(std::abs(var / expected - 1.0) < 1e-6);
}

TEST_CASE("two-level Rabi flopping without spatial dependence") {
  const auto g = grid1d(32, 1.0e-6);
  DressedHamiltonian h;
  h.mass = kCsMass;
  h.potentials = {std::vector<double>(g.total_points(), 0.0),
                  std::vector<double>(g.total_points(), 0.0)};
  const double Om = 4.0e4;
  h.couplings = {{0, 1, Om, 0.0}};

  auto psi = MultiLevelWavefunction::zero(2, g);
  const auto gs = gaussian_packet(g, 6.0e-8);
  std::copy(gs.amp.begin(), gs.amp.end(), psi.level(0));

  SUBCASE("resonant: populations follow sin^2(Omega t / 2)") {
    for (double frac : {0.2, 0.5, 0.9, 1.3}) {
      const double t = frac * cst::pi / Om;
      const auto out = propagate(psi, h, t);
      const auto pops = out.level_populations();
      const double s = std::sin(0.5 * Om * t);
      CHECK(std::abs(pops[1] - s * s) < 1e-8);
      CHECK(std::abs(pops[0] - (1 - s * s)) < 1e-8);
    }
  }

  SUBCASE("detuned: generalized Rabi formula") {
    const double delta = 3.0e4;
    h.couplings[0].detuning = delta;
    const double geff = std::sqrt(Om * Om + delta * delta);
    const double t = 0.7 * cst::pi / Om;
    const auto out = propagate(psi, h, t);
    const auto pops = out.level_populations();
    const double s = std::sin(0.5 * geff * t);
    CHECK(std::abs(pops[1] - Om * Om / (geff * geff) * s * s) < 1e-8);
  }
}

TEST_CASE("oracle equivalence on small grids") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto g = grid1d(32, 0.6e-6);
  const int n = g.total_points();

  for (int trial = 0; trial < 20; ++trial) {
    DressedHamiltonian h;
    h.mass = kCsMass;
    h.potentials.resize(4);
    for (auto& v : h.potentials) {
      v.resize(n);
      for (auto& x : v) x = 3e-28 * u(rng);
    }
    h.couplings = {{0, 2, 5e4 * u(rng), 2e4 * u(rng)},
                   {1, 3, 5e4 * u(rng), 2e4 * u(rng)},
                   {2, 3, 5e4 * u(rng), 0.0}};

    auto psi = MultiLevelWavefunction::zero(4, g);
    for (auto& a : psi.amp) a = cplx(u(rng), u(rng));
    psi.normalize();

    const double dt = (0.2 + std::abs(u(rng))) * 1e-9;
    const auto fast = propagate(psi, h, dt, {1e-12, 100000, 24});
    const auto exact = oracle_propagate(psi, h, dt);

    const double fidelity = std::norm(exact.inner(fast));
    CHECK(std::abs(fidelity - 1.0) < 1e-9);
    double maxdiff = 0.0;
    for (size_t k = 0; k < psi.amp.size(); ++k)
      maxdiff = std::max(maxdiff, std::abs(fast.amp[k] - exact.amp[k]));
    CHECK(maxdiff < 1e-8);
  }
}

TEST_CASE("oracle basics") {
  const auto g = grid1d(32, 0.6e-6);
  DressedHamiltonian h;
  h.mass = kCsMass;
  h.potentials.resize(2);
  for (auto& v : h.potentials) v.assign(g.total_points(), 1e-28);
  h.couplings = {{0, 1, 3e4, 0.0}};

  auto psi = MultiLevelWavefunction::zero(2, g);
  const auto gs = gaussian_packet(g, 5e-8);
  std::copy(gs.amp.begin(), gs.amp.end(), psi.level(0));

  SUBCASE("dt -> 0 is the identity") {
    const auto out = oracle_propagate(psi, h, 0.0);
    double maxdiff = 0.0;
    for (size_t k = 0; k < psi.amp.size(); ++k)
      maxdiff = std::max(maxdiff, std::abs(out.amp[k] - psi.amp[k]));
    CHECK(maxdiff < 1e-11);
  }
  SUBCASE("unitarity of the dense exponential") {
    const auto out = oracle_propagate(psi, h, 3.3e-6);
    CHECK(std::abs(out.norm_sq() - 1.0) < 1e-12);
  }
  SUBCASE("grids beyond the feasibility cap are refused") {
    const auto big = grid1d(512, 5e-6);
    DressedHamiltonian hb;
    hb.mass = kCsMass;
    hb.potentials.resize(4);
    for (auto& v : hb.potentials) v.assign(big.total_points(), 0.0);
    auto psib = MultiLevelWavefunction::zero(4, big);
    psib.amp[0] = 1.0;
    CHECK_THROWS_AS(oracle_propagate(psib, hb, 1e-9), GridTooLargeError);
  }
}

TEST_CASE("time reversal") {
  const auto g = grid1d(128, 1.2e-6);
  DressedHamiltonian h;
  h.mass = kCsMass;
  h.potentials.resize(2);
  for (int l = 0; l < 2; ++l) {
    h.potentials[l].resize(g.total_points());
    for (int k = 0; k < g.total_points(); ++k) {
      const double x = g.coord(k);
      h.potentials[l][k] = 0.5 * kCsMass * 1e10 * x * x * (l == 0 ? 1.0 : 0.8);
    }
  }
  h.couplings = {{0, 1, 5e4, 0.0}};

  auto psi = MultiLevelWavefunction::zero(2, g);
  const auto gs = gaussian_packet(g, 6e-8, 5e-8);
  std::copy(gs.amp.begin(), gs.amp.end(), psi.level(0));

  const double dt = 2.5e-5;
  const auto fwd = propagate(psi, h, dt);
  const auto back = propagate(fwd, h, -dt);
  CHECK(std::abs(std::norm(psi.inner(back)) - 1.0) < 1e-8);
}

TEST_CASE("error paths") {
  SUBCASE("tolerance unreachable under an order cap") {
    const auto g = grid1d(64, 0.6e-6);
    const auto h = free_particle(g, kCsMass);
    auto psi = gaussian_packet(g, 4e-8);
    PropagateOptions opt;
    opt.max_order = 8;
    opt.max_subdivisions = 2;
    CHECK_THROWS_AS(propagate(psi, h, 1e-4, opt), ToleranceUnreachableError);
  }
  SUBCASE("underresolved grid is refused") {
    LatticeConfig lat;
    lat.a = 5e-6;
    lat.U_L = 200e-6 * cst::k_boltzmann;
    const auto gate = make_microwave_config(2e5, 1.2e-6, 880e-9, 41341.0);
    const auto g = grid1d(256, lat.a);
    const auto setup = build_microwave_gate(lat, gate, g, kCsMass, 0.0);
    CHECK_THROWS_AS(
        propagate(setup.psi0, setup.schedule.segments[0].hamiltonian, 1e-6),
        GridUnderresolvedError);
  }
}

TEST_CASE("microwave gate construction") {
  LatticeConfig lat;
  lat.a = 5e-6;
  lat.U_L = 200e-6 * cst::k_boltzmann;
  auto gate = make_microwave_config(2e5, 1.2e-6, 880e-9, 41341.0);
  gate.T_1 = 76e-6;
  const auto g = grid1d(512, lat.a);
  const auto setup = build_microwave_gate(lat, gate, g, kCsMass, 0.0);

  SUBCASE("schedule lasts the quoted gate time") {
    CHECK(setup.schedule.total_duration() == doctest::Approx(76e-6).epsilon(1e-12));
  }
  SUBCASE("coupling ratio is exactly sqrt(3)/2") {
    const auto& c = setup.schedule.segments[0].hamiltonian.couplings;
    REQUIRE(c.size() == 3);
    CHECK(c[0].rabi / c[2].rabi == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
    CHECK(c[1].rabi / c[2].rabi == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
  }
  SUBCASE("|2>-|3> splitting swings by 2 hbar Delta_ac across the beam") {
    const auto& h = setup.schedule.segments[0].hamiltonian;
    const int mid = g.total_points() / 2;
    const double at_center = h.potentials[2][mid] - h.potentials[3][mid];
    const double at_edge = h.potentials[2][0] - h.potentials[3][0];
    CHECK(at_center - at_edge ==
          doctest::Approx(2.0 * cst::hbar * gate.Delta_ac).epsilon(5e-3));
  }
  SUBCASE("initial state is the normalized well ground state on level 0") {
    CHECK(setup.psi0.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    const auto pops = setup.psi0.level_populations();
    CHECK(pops[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pops[1] + pops[2] + pops[3] < 1e-15);
  }
}

TEST_CASE("microwave gate simulation") {
  LatticeConfig lat;
  lat.a = 5e-6;
  lat.U_L = 200e-6 * cst::k_boltzmann;
  auto gate = make_microwave_config(2e5, 1.2e-6, 880e-9, 41341.0);
  gate.T_1 = 76e-6;
  const auto g = grid1d(512, lat.a);

  SUBCASE("on-target error ~ 1e-6; value frozen for regression") {
    const auto setup = build_microwave_gate(lat, gate, g, kCsMass, 0.0);
    const auto res = simulate_gate(setup);
    CHECK(res.error == doctest::Approx(1.334e-6).epsilon(0.01));
    CHECK(res.error > 1e-6 / 3.0);
    CHECK(res.error < 1e-6 * 3.0);
    CHECK(std::abs(res.final_norm_sq - 1.0) < 1e-9);
    CHECK(res.edge_population < 1e-12);
    CHECK(res.level_populations[1] > 0.9999);
    // the residual is dominantly motional excitation of up to a few quanta
    CHECK(res.motional_excited_population ==
          doctest::Approx(1.47e-6).epsilon(0.05));
  }

  SUBCASE("pointing error raises the error to the 2e-5 scale") {
    const auto setup = build_microwave_gate(lat, gate, g, kCsMass, 0.01e-6);
    const auto res = simulate_gate(setup);
    CHECK(res.error == doctest::Approx(4.725e-5).epsilon(0.01));
    CHECK(res.error > 2e-5 / 3.0);
    CHECK(res.error < 2e-5 * 3.0);
  }

  SUBCASE("zero couplings leave the atom in |0>: error ~ 1, norm kept") {
    auto setup = build_microwave_gate(lat, gate, g, kCsMass, 0.0);
    setup.schedule.segments[0].hamiltonian.couplings.clear();
    const auto res = simulate_gate(setup);
    CHECK(res.error == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(res.final_norm_sq - 1.0) < 1e-9);
  }

  SUBCASE("grid doubling moves the gate error by well under 10%") {
    const auto res512 =
        simulate_gate(build_microwave_gate(lat, gate, g, kCsMass, 0.0));
    const auto res1024 = simulate_gate(
        build_microwave_gate(lat, gate, grid1d(1024, lat.a), kCsMass, 0.0));
    CHECK(std::abs(res1024.error / res512.error - 1.0) < 0.10);
  }

  SUBCASE("sequential legs perform worse than simultaneous drive") {
    const auto sim =
        simulate_gate(build_microwave_gate(lat, gate, g, kCsMass, 0.0, true));
    const auto seq =
        simulate_gate(build_microwave_gate(lat, gate, g, kCsMass, 0.0, false));
    CHECK(seq.error > 10.0 * sim.error);
  }

  SUBCASE("snapshots are emitted at the requested times") {
    auto setup = build_microwave_gate(lat, gate, g, kCsMass, 0.0);
    SimulateOptions opt;
    opt.snapshot_times = {19e-6, 38e-6, 57e-6};
    const auto res = simulate_gate(setup, opt);
    REQUIRE(res.snapshots.size() == 3);
    CHECK(res.snapshots[1].t == doctest::Approx(38e-6).epsilon(1e-12));
    for (const auto& s : res.snapshots)
      CHECK(std::abs(s.psi.norm_sq() - 1.0) < 1e-9);
    // mid-gate the population is distributed over the four levels
    const auto pops = res.snapshots[1].psi.level_populations();
    CHECK(pops[2] + pops[3] > 0.05);
  }
}

TEST_CASE("per-step cost consistent with N log N") {
  using clock = std::chrono::steady_clock;
  const double dx = 1.0e-8;
  const double dt = 4.0e-6;  // alpha ~ 50 at this spacing

  auto time_once = [&](int n) {
    const auto g = grid1d(n, n * dx);
    const auto h = free_particle(g, kCsMass);
    auto psi = gaussian_packet(g, 40 * dx);
    const auto warm = propagate(psi, h, dt);  // warm caches and plans
    (void)warm;
    double best = 1e100;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = clock::now();
      const auto out = propagate(psi, h, dt);
      const auto t1 = clock::now();
      best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
      (void)out;
    }
    return best;
  };

  bool ok = false;
  double exponent = 0.0;
  for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
    const double t10 = time_once(1 << 10);
    const double t14 = time_once(1 << 14);
    auto nlogn = [](double n) { return n * std::log(n); };
    exponent = std::log(t14 / t10) /
               std::log(nlogn(double(1 << 14)) / nlogn(double(1 << 10)));
    ok = exponent > 0.9 && exponent < 1.3;
  }
  INFO("fitted exponent ", exponent);
  CHECK(ok);
}

TEST_CASE("2D grid: stationary isotropic harmonic ground state") {
  SpatialGrid g;
  g.n_points = 32;
  g.length = 0.8e-6;
  g.dimensions = 2;
  const double omega = 1.0e5;
  DressedHamiltonian h;
  h.mass = kCsMass;
  h.potentials.resize(1);
  h.potentials[0].resize(g.total_points());
  for (int i = 0; i < g.n_points; ++i)
    for (int j = 0; j < g.n_points; ++j) {
      const double x = g.coord(i), y = g.coord(j);
      h.potentials[0][static_cast<size_t>(i) * g.n_points + j] =
          0.5 * kCsMass * omega * omega * (x * x + y * y);
    }
  auto psi = MultiLevelWavefunction::zero(1, g);
  const auto gs = ground_state(g, h.potentials[0], kCsMass);
  std::copy(gs.begin(), gs.end(), psi.level(0));
  CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));

  const auto out = propagate(psi, h, 2.0 * cst::pi / omega);
  CHECK(std::abs(std::norm(psi.inner(out)) - 1.0) < 1e-8);
}
