#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "latqc/atomic_data.hpp"
#include "latqc/constants.hpp"
#include "latqc/response.hpp"
#include "oracles/kh_oracle.hpp"

using namespace latqc;
namespace cst = latqc::constants;

static const std::string kCsPath = std::string(LATQC_DATA_DIR) + "/cs133.json";

namespace {
const AtomSpec& cs() {
  static AtomSpec atom = load_atom_spec(kCsPath);
  return atom;
}
Sublevel sub(int F2, int m2, const std::string& level = "6S1/2") {
  for (const auto& s : sublevels(cs(), cs().level_index(level)))
    if (s.F.twice() == F2 && s.m_F.twice() == m2) return s;
  throw std::runtime_error("no such sublevel");
}
double omega_of_nm(double lam_nm) {
  return 2.0 * cst::pi * cst::c_light / (lam_nm * 1e-9);
}
}  // namespace

TEST_CASE("cross_section basics at 800 nm") {
  const auto a = sub(6, 0);
  const Polarization ep(+1);

  SUBCASE("allowed Raman pathway is strictly positive; frozen fixture") {
    const auto b = sub(8, 0);  // bit-flip channel
    const double s = cross_section(cs(), a, b, omega_of_nm(800), ep);
    CHECK(s > 0.0);
    const double ref = kh_oracle::sigma_ab(cs(), a, b, omega_of_nm(800), 1);
    CHECK(s == doctest::Approx(ref).epsilon(1e-12));
    // value frozen from the direct-sum oracle
    CHECK(s == doctest::Approx(1.08924e-28).epsilon(1e-4));
  }

  SUBCASE("no connecting pathway gives zero") {
    // |Delta mF| = 3 cannot be bridged by two dipole steps
    CHECK(cross_section(cs(), a, sub(6, -6), omega_of_nm(800), ep) == 0.0);
    CHECK(cross_section(cs(), a, sub(8, 6), omega_of_nm(800), ep) == 0.0);
  }

  SUBCASE("scales as the fourth power of the reduced elements") {
    AtomSpec scaled = cs();
    const double f = 1.37;
    for (auto& line : scaled.lines) line.reduced_element *= f;
    const auto b = sub(8, 0);
    const double s0 = cross_section(cs(), a, b, omega_of_nm(800), ep);
    const double s1 = cross_section(scaled, a, b, omega_of_nm(800), ep);
    CHECK(s1 == doctest::Approx(std::pow(f, 4) * s0).epsilon(1e-12));
  }

  SUBCASE("resonance proximity is refused") {
    // hit the hyperfine-resolved D1 F'=4 component as seen from |3,0>
    double w_line = 0.0;
    for (const auto& i : sublevels(cs(), cs().level_index("6P1/2")))
      if (i.F.twice() == 8) w_line = i.absolute_energy - a.absolute_energy;
    const double window = 100.0 / 34.9e-9;
    CHECK_THROWS_AS(
        cross_section(cs(), a, sub(8, 0), w_line + 0.3 * window, ep),
        ResonanceProximityError);
    // just outside the window evaluates fine
    CHECK(std::isfinite(
        cross_section(cs(), a, sub(8, 0), w_line + 3.0 * window, ep)));
  }
}

TEST_CASE("raman and rayleigh cross sections") {
  const auto a = sub(6, 0);
  const Polarization ep(+1);
  const double w800 = omega_of_nm(800);

  SUBCASE("raman equals the sum over b != a") {
    double sum = 0.0;
    for (const auto& b : sublevels(cs(), cs().level_index("6S1/2"))) {
      if (b.F.twice() == a.F.twice() && b.m_F.twice() == a.m_F.twice()) continue;
      sum += cross_section(cs(), a, b, w800, ep);
    }
    CHECK(raman_cross_section(cs(), a, w800, ep) ==
          doctest::Approx(sum).epsilon(1e-14));
  }

  SUBCASE("frozen production fixtures at 800 nm") {
    CHECK(raman_cross_section(cs(), a, w800, ep) ==
          doctest::Approx(2.17830054e-28).epsilon(1e-6));
    CHECK(polarizability(cs(), a, w800, ep) ==
          doctest::Approx(-3.92500372e-38).epsilon(1e-6));
  }

  SUBCASE("rayleigh is cross_section(a, a)") {
    CHECK(rayleigh_cross_section(cs(), a, w800, ep) ==
          doctest::Approx(cross_section(cs(), a, a, w800, ep)).epsilon(1e-14));
    CHECK(rayleigh_cross_section(cs(), a, w800, ep) > 0.0);
  }

  SUBCASE("bit-flip channels carry roughly half of the Raman sum") {
    double flip = 0.0, total = 0.0;
    for (const auto& ch : raman_channels(cs(), a, w800, ep)) {
      total += ch.sigma;
      if (ch.final_state.F.twice() != a.F.twice() &&
          ch.final_state.m_F.twice() == a.m_F.twice())
        flip += ch.sigma;
    }
    CHECK(flip / total == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("production path matches the naive direct-sum oracle to 1e-10") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> lam(780.0, 1000.0);
  std::uniform_int_distribution<int> qd(-1, 1);
  const auto ground = sublevels(cs(), cs().level_index("6S1/2"));
  std::uniform_int_distribution<int> gd(0, static_cast<int>(ground.size()) - 1);

  int tested = 0;
  while (tested < 100) {
    const double lnm = lam(rng);
    // stay clear of the (tiny) resonance windows
    if (std::abs(lnm - 894.59) < 0.5 || std::abs(lnm - 852.35) < 0.5) continue;
    const auto& a = ground[gd(rng)];
    const int q = qd(rng);
    const double w = omega_of_nm(lnm);
    const Polarization ep(q);

    const double sr = raman_cross_section(cs(), a, w, ep);
    const double sr_ref = kh_oracle::sigma_raman(cs(), a, w, q);
    CHECK(std::abs(sr - sr_ref) <= 1e-10 * std::abs(sr_ref));

    const double al = polarizability(cs(), a, w, ep);
    const double al_ref = kh_oracle::alpha(cs(), a, w, q);
    CHECK(std::abs(al - al_ref) <= 1e-10 * std::abs(al_ref));

    CHECK(sr >= 0.0);
    CHECK(rayleigh_cross_section(cs(), a, w, ep) >= 0.0);
    ++tested;
  }
}

TEST_CASE("polarizability near the magic wavelength") {
  const Polarization ep(+1);
  const auto s31 = sub(6, 2), s41 = sub(8, 2);
  const auto s30 = sub(6, 0), s40 = sub(8, 0);

  const double lam_M =
      find_magic_wavelength(cs(), s31, s41, ep, 870e-9, 890e-9);
  const double wM = 2.0 * cst::pi * cst::c_light / lam_M;

  SUBCASE("|alpha| ~ 2.5e-38 with opposite signs for the mF = +-1 pair") {
    const double ap = polarizability(cs(), s31, wM, ep);
    const double am = polarizability(cs(), s41, wM, ep);
    CHECK(std::abs(ap) == doctest::Approx(2.5e-38).epsilon(0.20));
    CHECK(std::abs(am) == doctest::Approx(2.5e-38).epsilon(0.20));
    CHECK(ap * am < 0.0);
    // frozen from this data set
    CHECK(std::abs(ap) == doctest::Approx(2.4929e-38).epsilon(1e-3));
  }

  SUBCASE("mF = 0 polarizabilities are essentially zero at lambda_M") {
    const double a0 = std::abs(polarizability(cs(), s30, wM, ep));
    const double a1 = std::abs(polarizability(cs(), s40, wM, ep));
    const double amag = std::abs(polarizability(cs(), s31, wM, ep));
    CHECK(amag / a0 > 100.0);
    CHECK(amag / a1 > 100.0);
  }

  SUBCASE("polarizability is real and finite for real reduced elements") {
    CHECK(std::isfinite(polarizability(cs(), s30, wM, ep)));
  }
}

TEST_CASE("polarizability sign flips across an isolated resonance") {
  // D1 F'=4 hyperfine component seen from |F=3, mF=0>
  const auto a = sub(6, 0);
  double w_line = 0.0;
  for (const auto& i : sublevels(cs(), cs().level_index("6P1/2")))
    if (i.F.twice() == 8) w_line = i.absolute_energy - a.absolute_energy;
  REQUIRE(w_line > 0.0);
  const double window = 100.0 / 34.9e-9;  // rad/s, default exclusion
  const Polarization ep(+1);
  const double below = polarizability(cs(), a, w_line - 5 * window, ep);
  const double above = polarizability(cs(), a, w_line + 5 * window, ep);
  CHECK(below * above < 0.0);
}

TEST_CASE("find_magic_wavelength") {
  const Polarization ep(+1);
  const auto s31 = sub(6, 2), s41 = sub(8, 2);

  SUBCASE("lambda_M ~ 880 nm; fixture frozen from this data set") {
    const double lam = find_magic_wavelength(cs(), s31, s41, ep, 870e-9, 890e-9);
    CHECK(lam * 1e9 == doctest::Approx(880.0).epsilon(2.0 / 880.0));
    CHECK(lam * 1e9 == doctest::Approx(880.18894).epsilon(1e-5));
  }

  SUBCASE("bracket without a root is refused") {
    CHECK_THROWS_AS(
        find_magic_wavelength(cs(), s31, s41, ep, 900e-9, 950e-9),
        NoSignChangeError);
  }

  SUBCASE("swapping the pair returns the same root") {
    const double a_then_b =
        find_magic_wavelength(cs(), s31, s41, ep, 870e-9, 890e-9);
    const double b_then_a =
        find_magic_wavelength(cs(), s41, s31, ep, 870e-9, 890e-9);
    CHECK(a_then_b == doctest::Approx(b_then_a).epsilon(1e-12));
  }
}

TEST_CASE("response sweep") {
  const auto a = sub(6, 0);
  const Polarization ep(+1);

  SUBCASE("endpoints match single-point calls") {
    const auto pts = response_sweep(cs(), a, ep, 780e-9, 1000e-9, 23);
    REQUIRE(pts.size() == 23);  // default window is picometers wide: no gaps
    CHECK(pts.front().sigma_raman ==
          doctest::Approx(raman_cross_section(cs(), a, omega_of_nm(780), ep))
              .epsilon(1e-12));
    CHECK(pts.back().alpha ==
          doctest::Approx(polarizability(cs(), a, omega_of_nm(1000), ep))
              .epsilon(1e-12));
  }

  SUBCASE("n_points = 1 gives a single point at lambda_min") {
    const auto pts = response_sweep(cs(), a, ep, 800e-9, 900e-9, 1);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].omega == doctest::Approx(omega_of_nm(800)).epsilon(1e-12));
  }

  SUBCASE("points inside resonance windows become gaps") {
    ResponseOptions opt;
    opt.resonance_window_linewidths = 1e6;  // widen windows to ~nm scale
    const auto pts = response_sweep(cs(), a, ep, 780e-9, 1000e-9, 221, opt);
    CHECK(pts.size() < 221);
    CHECK(!pts.empty());
    for (const auto& p : pts) {
      CHECK(p.sigma_raman >= 0.0);
      CHECK(p.sigma_rayleigh >= 0.0);
    }
  }

  SUBCASE("divergence-shaped features around the D lines") {
    // sigma_raman grows by orders of magnitude approaching D2 from either side
    const double far = raman_cross_section(cs(), a, omega_of_nm(800), ep);
    const double near_d2 = raman_cross_section(cs(), a, omega_of_nm(852.0), ep);
    CHECK(near_d2 > 100.0 * far);
  }
}
