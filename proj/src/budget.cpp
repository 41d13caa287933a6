#include "latqc/budget.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "latqc/constants.hpp"

namespace latqc {

namespace cst = constants;

void OptimizationBox::validate() const {
  if (P_max <= 0.0) throw std::invalid_argument("P_max must be positive");
  if (!(a_min < a_max) || !(U_L_min < U_L_max) || !(Delta1_min < Delta1_max) ||
      !(w0_min < w0_max))
    throw std::invalid_argument("box bounds must be ordered");
}

namespace {

// objective over x = (a, w0, Delta_1, U_L) with Omega_R tied to the power
double objective(const OptimizationBox& box, double mass, const double* x) {
  LatticeConfig lat;
  lat.a = x[0];
  lat.U_L = x[3];
  lat.lambda_L = 800e-9;
  lat.sites_per_axis = 100;
  RamanGateConfig cfg = gate_config_from_power(box.P_max, x[1], x[2]);
  const double epg = total_raman_epg(cfg, lat, mass).total();
  if (!std::isfinite(epg))
    throw NonFiniteObjectiveError("EPG diverged inside the box");
  return epg;
}

struct LogBox {
  double lo[4], hi[4];  // log-space bounds

  explicit LogBox(const OptimizationBox& b) {
    const double los[4] = {b.a_min, b.w0_min, b.Delta1_min, b.U_L_min};
    const double his[4] = {b.a_max, b.w0_max, b.Delta1_max, b.U_L_max};
    for (int i = 0; i < 4; ++i) {
      lo[i] = std::log(los[i]);
      hi[i] = std::log(his[i]);
    }
  }
  // map unconstrained u to the box through a logistic squash
  void decode(const double* u, double* x) const {
    for (int i = 0; i < 4; ++i) {
      const double s = 1.0 / (1.0 + std::exp(-u[i]));
      x[i] = std::exp(lo[i] + (hi[i] - lo[i]) * s);
    }
  }
};

struct Simplex {
  double pts[5][4];
  double val[5];
};

// standard Nelder-Mead on the squashed coordinates
void nelder_mead(const OptimizationBox& box, double mass, const LogBox& lb,
                 double* u0, int iterations) {
  auto eval = [&](const double* u) {
    double x[4];
    lb.decode(u, x);
    return objective(box, mass, x);
  };

  Simplex s;
  for (int i = 0; i < 5; ++i) {
    for (int d = 0; d < 4; ++d) s.pts[i][d] = u0[d] + ((i == d + 1) ? 0.7 : 0.0);
    s.val[i] = eval(s.pts[i]);
  }

  for (int it = 0; it < iterations; ++it) {
    int order[5] = {0, 1, 2, 3, 4};
    std::sort(order, order + 5,
              [&](int a, int b) { return s.val[a] < s.val[b]; });
    const int best = order[0], worst = order[4], second = order[3];

    double centroid[4] = {0, 0, 0, 0};
    for (int i = 0; i < 5; ++i) {
      if (i == worst) continue;
      for (int d = 0; d < 4; ++d) centroid[d] += 0.25 * s.pts[i][d];
    }
    double refl[4];
    for (int d = 0; d < 4; ++d)
      refl[d] = centroid[d] + (centroid[d] - s.pts[worst][d]);
    const double f_refl = eval(refl);

    if (f_refl < s.val[best]) {
      double expand[4];
      for (int d = 0; d < 4; ++d)
        expand[d] = centroid[d] + 2.0 * (centroid[d] - s.pts[worst][d]);
      const double f_exp = eval(expand);
      const double* take = f_exp < f_refl ? expand : refl;
      const double f_take = std::min(f_exp, f_refl);
      std::copy(take, take + 4, s.pts[worst]);
      s.val[worst] = f_take;
    } else if (f_refl < s.val[second]) {
      std::copy(refl, refl + 4, s.pts[worst]);
      s.val[worst] = f_refl;
    } else {
      double contr[4];
      for (int d = 0; d < 4; ++d)
        contr[d] = centroid[d] + 0.5 * (s.pts[worst][d] - centroid[d]);
      const double f_con = eval(contr);
      if (f_con < s.val[worst]) {
        std::copy(contr, contr + 4, s.pts[worst]);
        s.val[worst] = f_con;
      } else {
        for (int i = 0; i < 5; ++i) {
          if (i == best) continue;
          for (int d = 0; d < 4; ++d)
            s.pts[i][d] = s.pts[best][d] + 0.5 * (s.pts[i][d] - s.pts[best][d]);
          s.val[i] = eval(s.pts[i]);
        }
      }
    }
    // converged when the simplex collapses
    double spread = 0.0;
    for (int i = 1; i < 5; ++i) spread = std::max(spread, std::abs(s.val[i] - s.val[0]));
    if (spread < 1e-9 * std::abs(s.val[0])) break;
  }

  int best = 0;
  for (int i = 1; i < 5; ++i)
    if (s.val[i] < s.val[best]) best = i;
  std::copy(s.pts[best], s.pts[best] + 4, u0);
}

// golden-section line search within [lo, hi] (log spacing), returns argmin
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::log(lo), b = std::log(hi);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(std::exp(c)), fd = f(std::exp(d));
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(std::exp(d));
    }
  }
  // compare the interior optimum against the exact box faces
  double xs[3] = {lo, std::exp(0.5 * (a + b)), hi};
  double best_x = xs[0], best_f = f(xs[0]);
  for (double x : {xs[1], xs[2]}) {
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace

RamanOptimum minimize_raman_epg(const OptimizationBox& box, double mass,
                                std::uint64_t seed) {
  box.validate();
  const LogBox lb(box);

  // 16 Latin-hypercube starts in the squashed coordinates
  std::mt19937_64 rng(seed);
  const int n_starts = 16;
  double starts[n_starts][4];
  for (int d = 0; d < 4; ++d) {
    int perm[n_starts];
    for (int i = 0; i < n_starts; ++i) perm[i] = i;
    std::shuffle(perm, perm + n_starts, rng);
    std::uniform_real_distribution<double> jit(0.0, 1.0);
    for (int i = 0; i < n_starts; ++i) {
      const double frac = (perm[i] + jit(rng)) / n_starts;  // (0,1)
      // logit back to the unconstrained coordinate
      starts[i][d] = std::log(frac / (1.0 - frac));
    }
  }

  double best_u[4] = {0, 0, 0, 0};
  double best_f = std::numeric_limits<double>::infinity();
  double best_x[4] = {0, 0, 0, 0};
  for (int i = 0; i < n_starts; ++i) {
    double u[4];
    std::copy(starts[i], starts[i] + 4, u);
    nelder_mead(box, mass, lb, u, 400);
    double x[4];
    lb.decode(u, x);
    const double f = objective(box, mass, x);
    // deterministic tie-break: value, then lexicographic parameters
    if (f < best_f ||
        (f == best_f && std::lexicographical_compare(x, x + 4, best_x, best_x + 4))) {
      best_f = f;
      std::copy(u, u + 4, best_u);
      std::copy(x, x + 4, best_x);
    }
  }

  // coordinate polish on the raw parameters; lands exactly on box faces
  double x[4];
  std::copy(best_x, best_x + 4, x);
  const double los[4] = {box.a_min, box.w0_min, box.Delta1_min, box.U_L_min};
  const double his[4] = {box.a_max, box.w0_max, box.Delta1_max, box.U_L_max};
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (int d = 0; d < 4; ++d) {
      auto f1 = [&](double v) {
        double y[4];
        std::copy(x, x + 4, y);
        y[d] = v;
        return objective(box, mass, y);
      };
      x[d] = golden_min(f1, los[d], his[d]);
    }
  }

  // certify: +-2% coordinate moves (clamped to the box) must not improve
  // the value by more than 0.5%
  const double f_final = objective(box, mass, x);
  for (int d = 0; d < 4; ++d) {
    for (double fac : {0.98, 1.02}) {
      double y[4];
      std::copy(x, x + 4, y);
      y[d] = std::clamp(x[d] * fac, los[d], his[d]);
      if (objective(box, mass, y) < f_final * 0.995)
        throw std::logic_error("optimizer certification failed");
    }
  }

  RamanOptimum out;
  out.a = x[0];
  out.w0 = x[1];
  out.Delta_1 = x[2];
  out.U_L = x[3];
  RamanGateConfig cfg = gate_config_from_power(box.P_max, out.w0, out.Delta_1);
  out.Omega_R = std::abs(cfg.Omega_R);
  LatticeConfig lat;
  lat.a = out.a;
  lat.U_L = out.U_L;
  lat.lambda_L = 800e-9;
  lat.sites_per_axis = 100;
  out.breakdown = total_raman_epg(cfg, lat, mass);
  out.epg = out.breakdown.total();
  return out;
}

std::vector<double> epg_surface(const std::vector<double>& a_grid,
                                const std::vector<double>& w0_grid,
                                double U_L, double Delta_1, double P_R,
                                double mass) {
  std::vector<double> out;
  out.reserve(a_grid.size() * w0_grid.size());
  for (double a : a_grid) {
    for (double w0 : w0_grid) {
      LatticeConfig lat;
      lat.a = a;
      lat.U_L = U_L;
      lat.lambda_L = 800e-9;
      lat.sites_per_axis = 100;
      const auto cfg = gate_config_from_power(P_R, w0, Delta_1);
      out.push_back(total_raman_epg(cfg, lat, mass).total());
    }
  }
  return out;
}

void write_surface_csv(const std::string& path,
                       const std::vector<double>& a_grid,
                       const std::vector<double>& w0_grid,
                       const std::vector<double>& epg) {
  if (epg.size() != a_grid.size() * w0_grid.size())
    throw std::invalid_argument("surface size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "a_m,w0_m,epg\n";
  char buf[96];
  for (size_t i = 0; i < a_grid.size(); ++i)
    for (size_t j = 0; j < w0_grid.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.9e,%.9e,%.12e\n", a_grid[i],
                    w0_grid[j], epg[i * w0_grid.size() + j]);
      out << buf;
    }
}

CrossTalkDensity crosstalk_density(const CrossTalkModel& model,
                                   double reference_epg_at_1_site) {
  model.validate();
  if (reference_epg_at_1_site < 0.0)
    throw std::invalid_argument("reference EPG must be >= 0");
  CrossTalkDensity out;
  if (reference_epg_at_1_site <= model.threshold) {
    out.min_separation_sites = 1;
    out.atoms_per_gate = 1.0;
    return out;
  }
  const double r = std::pow(reference_epg_at_1_site / model.threshold,
                            1.0 / model.falloff_exponent);
  out.min_separation_sites = static_cast<int>(std::ceil(r - 1e-12));
  out.atoms_per_gate = r * r * r;
  return out;
}

ScalingReport scaling_report(const ScalingScenario& scenario,
                             const AtomSpec& atom, double gate_epg,
                             double gate_time, const ResponseOptions& opt) {
  const auto& lat = scenario.lattice;
  lat.validate();
  if (gate_time <= 0.0) throw std::invalid_argument("gate time must be positive");

  ScalingReport r;
  r.qubits = std::pow(lat.sites_per_axis, lat.dimensions);
  r.power_per_beam_set = lattice_power_required(lat, atom, 1.0, opt);
  r.kilowatt_flag = r.power_per_beam_set >= 1e3 * (1.0 - 1e-9);

  switch (scenario.n_A_model) {
    case AddressModel::constant:
      r.n_A = scenario.n_A_constant;
      break;
    case AddressModel::per_row:
      r.n_A = std::pow(r.qubits, 1.0 / 3.0);
      break;
    case AddressModel::per_plane:
      r.n_A = std::pow(r.qubits, 2.0 / 3.0);
      break;
    case AddressModel::all:
      r.n_A = r.qubits;
      break;
  }
  r.n_A = std::max(1.0, std::min(r.n_A, r.qubits));

  Sublevel q0;
  for (const auto& s : sublevels(atom, atom.level_index("6S1/2")))
    if (s.F.twice() == 6 && s.m_F.twice() == 0) q0 = s;
  const Polarization ep(+1);
  r.storage_raman_rate = storage_scatter_rate(lat, atom, q0, ep, opt);
  r.total_scatter_rate = total_scatter_rate(lat, atom, q0, ep, opt);

  StorageContext ctx;
  ctx.N = r.qubits;
  ctx.n_A = r.n_A;
  ctx.T_1 = gate_time;
  r.storage_epg = storage_epg(r.storage_raman_rate, ctx);
  r.gate_epg = gate_epg;
  r.steps_to_failure = 1.0 / (r.total_scatter_rate * gate_time);
  r.gates_per_qubit = r.steps_to_failure * r.n_A / r.qubits;
  return r;
}

std::string format_scaling_report(const ScalingReport& r) {
  std::ostringstream os;
  char line[128];
  auto row = [&](const char* k, double v, const char* unit) {
    std::snprintf(line, sizeof(line), "  %-26s %.6e %s\n", k, v, unit);
    os << line;
  };
  os << "scaling report\n";
  row("qubits", r.qubits, "");
  row("power per beam set", r.power_per_beam_set, "W");
  os << "  kilowatt flag              " << (r.kilowatt_flag ? "yes" : "no") << "\n";
  row("addressable in parallel", r.n_A, "");
  row("storage Raman rate", r.storage_raman_rate, "1/s");
  row("total scatter rate", r.total_scatter_rate, "1/s");
  row("storage EPG", r.storage_epg, "");
  row("gate EPG", r.gate_epg, "");
  row("time-steps to failure", r.steps_to_failure, "");
  row("gates per qubit", r.gates_per_qubit, "");
  return os.str();
}

}  // namespace latqc
