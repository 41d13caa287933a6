#include "latqc/response.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "latqc/constants.hpp"

namespace latqc {

namespace {

namespace cst = constants;

struct Intermediates {
  std::vector<Sublevel> states;
  std::vector<double> reduced;  // line reduced element per state, m
  std::vector<double> window;   // resonance exclusion half-width, rad/s
};

Intermediates collect_intermediates(const AtomSpec& atom, int ground_index,
                                    const ResponseOptions& opt) {
  Intermediates out;
  for (const auto& line : atom.lines) {
    if (line.lower != ground_index) continue;
    const double win = opt.resonance_window_linewidths / line.lifetime;
    for (const auto& s : sublevels(atom, line.upper)) {
      out.states.push_back(s);
      out.reduced.push_back(line.reduced_element);
      out.window.push_back(win);
    }
  }
  if (out.states.empty())
    throw AtomDataError("no lines from the requested ground level");
  return out;
}

int require_ground(const AtomSpec& atom, const Sublevel& a) {
  if (atom.fine_levels.at(a.fine).energy != 0.0)
    throw std::invalid_argument("state must belong to the ground fine level");
  return a.fine;
}

void check_resonance(const AtomSpec&, const Sublevel& a,
                     const Intermediates& im, double omega) {
  for (size_t k = 0; k < im.states.size(); ++k) {
    const double w_ia = transition_frequency(a, im.states[k]);
    if (std::abs(w_ia - omega) < im.window[k]) {
      std::ostringstream os;
      os << "omega = " << omega << " rad/s is within " << im.window[k]
         << " rad/s of the resonance at " << w_ia << " rad/s";
      throw ResonanceProximityError(os.str());
    }
  }
}

bool inside_resonance_window(const Sublevel& a, const Intermediates& im,
                             double omega) {
  for (size_t k = 0; k < im.states.size(); ++k)
    if (std::abs(transition_frequency(a, im.states[k]) - omega) < im.window[k])
      return true;
  return false;
}

// <g| x.eps_q* |i> for intermediate k, meters
double elem(const AtomSpec& atom, const Sublevel& g, const Intermediates& im,
            size_t k, int q) {
  return hyperfine_dipole_element(
      g.F, g.m_F, atom.fine_levels[g.fine].J, im.states[k].F,
      im.states[k].m_F, atom.fine_levels[im.states[k].fine].J, q,
      im.reduced[k], atom.nuclear_spin);
}

double cross_section_impl(const AtomSpec& atom, const Sublevel& a,
                          const Sublevel& b, double omega,
                          const Intermediates& im, int q) {
  const double omega_p = omega - (b.absolute_energy - a.absolute_energy);
  if (omega_p <= 0.0) return 0.0;

  // M tables: resonant term needs M_q(a,i), M_q'(b,i); anti-resonant term
  // needs M_{-q}(b,i), M_{-q'}(a,i). The 3j selection rules leave most
  // entries zero; they are cheap enough to fill wholesale.
  const size_t n = im.states.size();
  double sum_sq = 0.0;
  for (int qp = -1; qp <= 1; ++qp) {
    const int anti_sign = ((q + qp) % 2 == 0) ? 1 : -1;
    double amp = 0.0;
    for (size_t k = 0; k < n; ++k) {
      const double w_ia = transition_frequency(a, im.states[k]);
      const double res = elem(atom, a, im, k, q) * elem(atom, b, im, k, qp);
      if (res != 0.0) amp += res / (w_ia - omega);
      const double anti =
          elem(atom, b, im, k, -q) * elem(atom, a, im, k, -qp);
      if (anti != 0.0) amp += anti_sign * anti / (w_ia + omega_p);
    }
    sum_sq += amp * amp;
  }

  const double pref = (8.0 * cst::pi / 3.0) * cst::alpha_fs * cst::alpha_fs *
                      omega * omega_p * omega_p * omega_p /
                      (cst::c_light * cst::c_light);
  return pref * sum_sq;
}

}  // namespace

double cross_section(const AtomSpec& atom, const Sublevel& a,
                     const Sublevel& b, double omega, Polarization eps_in,
                     const ResponseOptions& opt) {
  const int g = require_ground(atom, a);
  require_ground(atom, b);
  if (omega <= 0.0) throw std::invalid_argument("omega must be positive");
  const auto im = collect_intermediates(atom, g, opt);
  check_resonance(atom, a, im, omega);
  return cross_section_impl(atom, a, b, omega, im, eps_in.q);
}

std::vector<RamanChannel> raman_channels(const AtomSpec& atom,
                                         const Sublevel& a, double omega,
                                         Polarization eps_in,
                                         const ResponseOptions& opt) {
  const int g = require_ground(atom, a);
  if (omega <= 0.0) throw std::invalid_argument("omega must be positive");
  const auto im = collect_intermediates(atom, g, opt);
  check_resonance(atom, a, im, omega);

  std::vector<RamanChannel> out;
  for (const auto& b : sublevels(atom, g)) {
    if (b.F == a.F && b.m_F == a.m_F) continue;
    RamanChannel ch;
    ch.final_state = b;
    ch.sigma = cross_section_impl(atom, a, b, omega, im, eps_in.q);
    out.push_back(ch);
  }
  return out;
}

double raman_cross_section(const AtomSpec& atom, const Sublevel& a,
                           double omega, Polarization eps_in,
                           const ResponseOptions& opt) {
  double sum = 0.0;
  for (const auto& ch : raman_channels(atom, a, omega, eps_in, opt))
    sum += ch.sigma;
  return sum;
}

double rayleigh_cross_section(const AtomSpec& atom, const Sublevel& a,
                              double omega, Polarization eps_in,
                              const ResponseOptions& opt) {
  return cross_section(atom, a, a, omega, eps_in, opt);
}

double polarizability(const AtomSpec& atom, const Sublevel& a, double omega,
                      Polarization eps_in, const ResponseOptions& opt) {
  const int g = require_ground(atom, a);
  if (omega <= 0.0) throw std::invalid_argument("omega must be positive");
  const auto im = collect_intermediates(atom, g, opt);
  check_resonance(atom, a, im, omega);

  const int q = eps_in.q;
  double sum = 0.0;
  for (size_t k = 0; k < im.states.size(); ++k) {
    const double w_ia = transition_frequency(a, im.states[k]);
    const double m_res = elem(atom, a, im, k, q);
    if (m_res != 0.0) sum += m_res * m_res / (w_ia - omega);
    const double m_anti = elem(atom, a, im, k, -q);
    if (m_anti != 0.0) sum += m_anti * m_anti / (w_ia + omega);
  }
  return cst::e_charge * cst::e_charge / cst::hbar * sum;
}

double find_magic_wavelength(const AtomSpec& atom, const Sublevel& s_plus,
                             const Sublevel& s_minus, Polarization eps_in,
                             double lambda_lo, double lambda_hi,
                             const ResponseOptions& opt) {
  if (lambda_lo > lambda_hi) std::swap(lambda_lo, lambda_hi);
  auto sum_alpha = [&](double lambda) {
    const double omega = 2.0 * cst::pi * cst::c_light / lambda;
    return polarizability(atom, s_plus, omega, eps_in, opt) +
           polarizability(atom, s_minus, omega, eps_in, opt);
  };
  double f_lo = sum_alpha(lambda_lo);
  double f_hi = sum_alpha(lambda_hi);
  if (f_lo == 0.0) return lambda_lo;
  if (f_hi == 0.0) return lambda_hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw NoSignChangeError(
        "alpha_plus + alpha_minus does not change sign across the bracket");

  while (lambda_hi - lambda_lo > 1e-4 * 1e-9) {
    const double mid = 0.5 * (lambda_lo + lambda_hi);
    const double f_mid = sum_alpha(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lambda_lo = mid;
      f_lo = f_mid;
    } else {
      lambda_hi = mid;
    }
  }
  return 0.5 * (lambda_lo + lambda_hi);
}

std::vector<ResponsePoint> response_sweep(const AtomSpec& atom,
                                          const Sublevel& a,
                                          Polarization eps_in,
                                          double lambda_min, double lambda_max,
                                          int n_points,
                                          const ResponseOptions& opt) {
  if (n_points < 1) throw std::invalid_argument("n_points must be >= 1");
  const int g = require_ground(atom, a);
  const auto im = collect_intermediates(atom, g, opt);

  std::vector<ResponsePoint> out;
  for (int k = 0; k < n_points; ++k) {
    const double lambda =
        (n_points == 1)
            ? lambda_min
            : lambda_min + (lambda_max - lambda_min) * k / (n_points - 1);
    const double omega = 2.0 * cst::pi * cst::c_light / lambda;
    if (inside_resonance_window(a, im, omega)) continue;  // gap
    ResponsePoint p;
    p.omega = omega;
    p.sigma_raman = raman_cross_section(atom, a, omega, eps_in, opt);
    p.sigma_rayleigh = rayleigh_cross_section(atom, a, omega, eps_in, opt);
    p.alpha = polarizability(atom, a, omega, eps_in, opt);
    out.push_back(p);
  }
  return out;
}

void write_sweep_csv(const std::string& path,
                     const std::vector<ResponsePoint>& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "lambda_nm,sigma_raman_m2,sigma_rayleigh_m2,alpha_SI\n";
  char buf[160];
  for (const auto& p : points) {
    const double lambda_nm = 2.0 * cst::pi * cst::c_light / p.omega * 1e9;
    std::snprintf(buf, sizeof(buf), "%.9f,%.12e,%.12e,%.12e\n", lambda_nm,
                  p.sigma_raman, p.sigma_rayleigh, p.alpha);
    out << buf;
  }
}

}  // namespace latqc
