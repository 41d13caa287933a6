#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "config.hpp"
#include "latqc/budget.hpp"
#include "latqc/constants.hpp"
#include "latqc/propagator.hpp"

namespace fs = std::filesystem;
namespace cst = latqc::constants;
using latqc_cli::ConfigError;
using latqc_cli::RunConfig;
using nlohmann::json;

#ifndef LATQC_DATA_DIR
#define LATQC_DATA_DIR "data"
#endif

namespace {

latqc::AtomSpec load_atom(const RunConfig& cfg) {
  std::string path = cfg.get_string("atom.data", "");
  if (path.empty()) {
    path = "data/cs133.json";
    if (!fs::exists(path)) path = std::string(LATQC_DATA_DIR) + "/cs133.json";
  }
  return latqc::load_atom_spec(path);
}

latqc::LatticeConfig lattice_from(const RunConfig& cfg) {
  latqc::LatticeConfig lat;
  lat.a = cfg.get_number("lattice.a_um", 5.0) * 1e-6;
  lat.U_L = cfg.get_number("lattice.U_L_uK", 200.0) * 1e-6 * cst::k_boltzmann;
  lat.lambda_L = cfg.get_number("lattice.lambda_L_nm", 800.0) * 1e-9;
  const std::string side = cfg.get_string("lattice.detuning", "blue");
  if (side == "blue")
    lat.detuning_side = latqc::DetuningSide::blue;
  else if (side == "red")
    lat.detuning_side = latqc::DetuningSide::red;
  else
    throw ConfigError("lattice.detuning must be blue or red");
  lat.sites_per_axis = static_cast<int>(cfg.get_int("lattice.sites_per_axis", 100));
  lat.dimensions = static_cast<int>(cfg.get_int("lattice.dimensions", 3));
  lat.validate();
  return lat;
}

latqc::StorageContext storage_from(const RunConfig& cfg) {
  latqc::StorageContext ctx;
  ctx.N = cfg.get_number("storage.N", 1e6);
  ctx.n_A = cfg.get_number("storage.n_A", 100.0);
  ctx.T_1 = cfg.get_number("storage.T1_us", 76.0) * 1e-6;
  ctx.validate();
  return ctx;
}

latqc::MicrowaveGateConfig microwave_from(const RunConfig& cfg) {
  auto g = latqc::make_microwave_config(
      cfg.get_number("microwave.Delta_ac", 2e5),
      cfg.get_number("microwave.w0_um", 1.2) * 1e-6,
      cfg.get_number("microwave.lambda_M_nm", 880.0) * 1e-9,
      cfg.get_number("microwave.Omega_1", 41341.0),
      cfg.get_number("microwave.delta_T_s", 1e-10),
      cfg.get_number("microwave.delta_x_um", 0.01) * 1e-6);
  g.T_1 = cfg.get_number("microwave.T1_us", 76.0) * 1e-6;
  return g;
}

latqc::Sublevel ground_sublevel(const latqc::AtomSpec& atom, int F, int mF) {
  for (const auto& s :
       latqc::sublevels(atom, atom.level_index(atom.ground_level().label)))
    if (s.F.twice() == 2 * F && s.m_F.twice() == 2 * mF) return s;
  throw ConfigError("no ground sublevel F=" + std::to_string(F) +
                    " mF=" + std::to_string(mF));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << text;
}

void write_json(const fs::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

int run_sweep(const RunConfig& cfg, const fs::path& out_dir) {
  const auto atom = load_atom(cfg);
  const auto a = ground_sublevel(atom, static_cast<int>(cfg.get_int("sweep.F", 3)),
                                 static_cast<int>(cfg.get_int("sweep.m_F", 0)));
  const latqc::Polarization ep(static_cast<int>(cfg.get_int("sweep.q", 1)));
  latqc::ResponseOptions opt;
  opt.resonance_window_linewidths =
      cfg.get_number("sweep.window_linewidths", 100.0);
  const auto points = latqc::response_sweep(
      atom, a, ep, cfg.get_number("sweep.lambda_min_nm", 780.0) * 1e-9,
      cfg.get_number("sweep.lambda_max_nm", 1000.0) * 1e-9,
      static_cast<int>(cfg.get_int("sweep.n_points", 221)), opt);
  latqc::write_sweep_csv((out_dir / "sweep.csv").string(), points);
  std::printf("sweep: %zu points -> %s\n", points.size(),
              (out_dir / "sweep.csv").c_str());
  return 0;
}

int run_budget_raman(const RunConfig& cfg, const fs::path& out_dir) {
  const auto lat = lattice_from(cfg);
  const auto gate = latqc::gate_config_from_power(
      cfg.get_number("raman.P_R_mW", 10.0) * 1e-3,
      cfg.get_number("raman.w0_um", 5.0) * 1e-6,
      2.0 * cst::pi * cfg.get_number("raman.Delta1_THz", 5.0) * 1e12);
  const auto atom = load_atom(cfg);
  const auto b = latqc::total_raman_epg(gate, lat, atom.mass);

  const std::pair<const char*, double> rows[] = {
      {"neighbor atoms", b.neighbor},
      {"spontaneous emission", b.spontaneous},
      {"AC Stark shifts", b.ac_stark},
      {"pulse-area variation", b.pulse_area},
      {"Doppler detuning", b.doppler},
      {"polarization leakage", b.polarization},
      {"laser intensity noise", b.shot_noise},
  };
  std::string text = "Raman gate error budget\n";
  json jrows = json::array();
  char line[128];
  for (const auto& [name, value] : rows) {
    std::snprintf(line, sizeof(line), "  %-24s %.6e\n", name, value);
    text += line;
    jrows.push_back({{"name", name}, {"epg", value}});
  }
  std::snprintf(line, sizeof(line), "  %-24s %.6e\n", "total", b.total());
  text += line;
  for (const auto& w : b.warnings) text += "  warning: " + w + "\n";

  write_text(out_dir / "budget_raman.txt", text);
  write_json(out_dir / "budget_raman.json",
             {{"gate", "raman"},
              {"mechanisms", jrows},
              {"total", b.total()},
              {"warnings", b.warnings}});
  std::fputs(text.c_str(), stdout);
  return 0;
}

int run_budget_microwave(const RunConfig& cfg, const fs::path& out_dir,
                         bool with_simulation) {
  const auto lat = lattice_from(cfg);
  const auto gate = microwave_from(cfg);
  const auto ctx = storage_from(cfg);
  const auto atom = load_atom(cfg);
  const auto b = latqc::total_microwave_epg(gate, lat, atom.mass, ctx);

  const auto q0 = ground_sublevel(atom, 3, 0);
  const double storage_rate = latqc::storage_scatter_rate(
      lat, atom, q0, latqc::Polarization(+1));
  const double storage = latqc::storage_epg(storage_rate, ctx);

  double sim_heating = -1.0, sim_position = -1.0;
  if (with_simulation) {
    latqc::SpatialGrid grid;
    grid.n_points = 512;
    grid.length = lat.a;
    const auto on_target =
        latqc::simulate_gate(latqc::build_microwave_gate(lat, gate, grid, atom.mass, 0.0));
    sim_heating = on_target.error;
    const auto displaced = latqc::simulate_gate(
        latqc::build_microwave_gate(lat, gate, grid, atom.mass, gate.delta_x));
    sim_position = displaced.error;
  }

  struct Row {
    const char* name;
    double formula;
    double sim;
  };
  const Row rows[] = {
      {"lattice Raman scattering (storage)", storage, -1.0},
      {"off-resonant transitions", b.off_resonant, -1.0},
      {"addressing-beam heating", b.heating, sim_heating},
      {"addressing-beam Raman scattering", b.scatter, -1.0},
      {"beam position: transition loss", b.position_detuning, -1.0},
      {"beam position: heating", b.position_heating, sim_position},
  };
  std::string text = "Microwave gate error budget\n";
  std::string header = "  source                                formula      simulation\n";
  text += header;
  json jrows = json::array();
  char line[160];
  for (const auto& r : rows) {
    if (r.sim >= 0.0)
      std::snprintf(line, sizeof(line), "  %-36s %.6e %.6e\n", r.name,
                    r.formula, r.sim);
    else
      std::snprintf(line, sizeof(line), "  %-36s %.6e\n", r.name, r.formula);
    text += line;
    json jr = {{"name", r.name}, {"formula_epg", r.formula}};
    if (r.sim >= 0.0) jr["simulation_epg"] = r.sim;
    jrows.push_back(jr);
  }
  std::snprintf(line, sizeof(line), "  %-36s %.6e\n",
                "gate-mechanism total (formula)", b.total());
  text += line;

  write_text(out_dir / "budget_microwave.txt", text);
  write_json(out_dir / "budget_microwave.json",
             {{"gate", "microwave"},
              {"rows", jrows},
              {"gate_total_formula", b.total()},
              {"storage_epg", storage},
              {"storage_rate_per_s", storage_rate}});
  std::fputs(text.c_str(), stdout);
  return 0;
}

int run_optimize(const RunConfig& cfg, const fs::path& out_dir,
                 std::uint64_t seed) {
  latqc::OptimizationBox box;
  box.P_max = cfg.get_number("optimize.P_max_mW", 10.0) * 1e-3;
  box.a_max = cfg.get_number("optimize.a_max_um", 10.0) * 1e-6;
  box.U_L_max = cfg.get_number("optimize.U_L_max_uK", 500.0) * 1e-6 * cst::k_boltzmann;
  box.Delta1_max = 2.0 * cst::pi * cfg.get_number("optimize.Delta1_max_THz", 5.0) * 1e12;
  box.w0_min = cfg.get_number("optimize.w0_min_um", 1.0) * 1e-6;
  box.w0_max = cfg.get_number("optimize.w0_max_um", 10.0) * 1e-6;
  const auto atom = load_atom(cfg);
  const auto opt = latqc::minimize_raman_epg(box, atom.mass, seed);

  char line[160];
  std::string text = "Raman gate EPG minimization\n";
  std::snprintf(line, sizeof(line),
                "  a = %.4f um\n  w0 = %.4f um\n  Delta1/2pi = %.4f THz\n"
                "  U_L = %.4f uK\n  |Omega_R| = %.6e rad/s\n  EPG = %.6e\n",
                opt.a * 1e6, opt.w0 * 1e6, opt.Delta_1 / (2e12 * cst::pi),
                opt.U_L / cst::k_boltzmann * 1e6, opt.Omega_R, opt.epg);
  text += line;
  write_text(out_dir / "optimize.txt", text);
  write_json(out_dir / "optimize.json",
             {{"a_m", opt.a},
              {"w0_m", opt.w0},
              {"Delta1_rad_per_s", opt.Delta_1},
              {"U_L_J", opt.U_L},
              {"Omega_R_rad_per_s", opt.Omega_R},
              {"epg", opt.epg},
              {"breakdown",
               {{"neighbor", opt.breakdown.neighbor},
                {"spontaneous", opt.breakdown.spontaneous},
                {"ac_stark", opt.breakdown.ac_stark},
                {"pulse_area", opt.breakdown.pulse_area},
                {"doppler", opt.breakdown.doppler},
                {"polarization", opt.breakdown.polarization},
                {"shot_noise", opt.breakdown.shot_noise}}}});
  std::fputs(text.c_str(), stdout);
  return 0;
}

int run_surface(const RunConfig& cfg, const fs::path& out_dir) {
  const int n_a = static_cast<int>(cfg.get_int("surface.n_a", 25));
  const int n_w = static_cast<int>(cfg.get_int("surface.n_w0", 25));
  if (n_a < 2 || n_w < 2) throw ConfigError("surface grids need >= 2 points");
  const double a_lo = cfg.get_number("surface.a_min_um", 4.0) * 1e-6;
  const double a_hi = cfg.get_number("surface.a_max_um", 10.0) * 1e-6;
  const double w_lo = cfg.get_number("surface.w0_min_um", 2.0) * 1e-6;
  const double w_hi = cfg.get_number("surface.w0_max_um", 8.0) * 1e-6;
  std::vector<double> a_grid(n_a), w0_grid(n_w);
  for (int i = 0; i < n_a; ++i)
    a_grid[i] = a_lo + (a_hi - a_lo) * i / (n_a - 1);
  for (int j = 0; j < n_w; ++j)
    w0_grid[j] = w_lo + (w_hi - w_lo) * j / (n_w - 1);

  const auto atom = load_atom(cfg);
  const auto surf = latqc::epg_surface(
      a_grid, w0_grid,
      cfg.get_number("surface.U_L_uK", 500.0) * 1e-6 * cst::k_boltzmann,
      2.0 * cst::pi * cfg.get_number("surface.Delta1_THz", 5.0) * 1e12,
      cfg.get_number("surface.P_R_mW", 10.0) * 1e-3, atom.mass);
  latqc::write_surface_csv((out_dir / "surface.csv").string(), a_grid, w0_grid,
                           surf);
  std::printf("surface: %zu points -> %s\n", surf.size(),
              (out_dir / "surface.csv").c_str());
  return 0;
}

int run_simulate(const RunConfig& cfg, const fs::path& out_dir) {
  const auto lat = lattice_from(cfg);
  const auto gate = microwave_from(cfg);
  const auto atom = load_atom(cfg);

  latqc::SpatialGrid grid;
  grid.n_points = static_cast<int>(cfg.get_int("simulate.n_points", 512));
  grid.length = lat.a;
  grid.dimensions = 1;

  const double delta_x = cfg.get_number("simulate.delta_x_um", 0.0) * 1e-6;
  const bool simultaneous = cfg.get_bool("simulate.simultaneous", true);
  const auto setup = latqc::build_microwave_gate(lat, gate, grid, atom.mass,
                                                 delta_x, simultaneous);

  latqc::SimulateOptions opt;
  opt.prop.tolerance = cfg.get_number("simulate.tolerance", 1e-10);
  for (double t_us : cfg.get_number_list("simulate.snapshot_times_us"))
    opt.snapshot_times.push_back(t_us * 1e-6);
  const auto res = latqc::simulate_gate(setup, opt);

  json doc = {{"error", res.error},
              {"level_populations", res.level_populations},
              {"motional_populations", res.motional_populations},
              {"motional_excited_population", res.motional_excited_population},
              {"final_norm_sq", res.final_norm_sq},
              {"edge_population", res.edge_population},
              {"delta_x_m", delta_x},
              {"gate_time_s", setup.schedule.total_duration()}};
  json times = json::array();
  for (size_t k = 0; k < res.snapshots.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%zu.csv", k);
    latqc::write_snapshot_csv((out_dir / name).string(), res.snapshots[k].psi);
    times.push_back({{"t_s", res.snapshots[k].t}, {"file", name}});
  }
  doc["snapshots"] = times;
  write_json(out_dir / "simulate.json", doc);
  std::printf("simulate: error = %.6e -> %s\n", res.error,
              (out_dir / "simulate.json").c_str());
  return 0;
}

int run_scaling(const RunConfig& cfg, const fs::path& out_dir) {
  latqc::ScalingScenario sc;
  sc.lattice = lattice_from(cfg);
  const std::string gate = cfg.get_string("scaling.gate", "raman");
  if (gate == "raman")
    sc.gate_kind = latqc::GateKind::raman;
  else if (gate == "microwave")
    sc.gate_kind = latqc::GateKind::microwave;
  else
    throw ConfigError("scaling.gate must be raman or microwave");
  const std::string model = cfg.get_string("scaling.n_A_model", "constant");
  if (model == "constant")
    sc.n_A_model = latqc::AddressModel::constant;
  else if (model == "per_row")
    sc.n_A_model = latqc::AddressModel::per_row;
  else if (model == "per_plane")
    sc.n_A_model = latqc::AddressModel::per_plane;
  else if (model == "all")
    sc.n_A_model = latqc::AddressModel::all;
  else
    throw ConfigError("scaling.n_A_model must be constant|per_row|per_plane|all");
  sc.n_A_constant = cfg.get_number("scaling.n_A", 1e4);

  const auto atom = load_atom(cfg);
  const double gate_epg = cfg.get_number("scaling.gate_epg", 1e-5);
  const double gate_time = cfg.get_number("scaling.gate_time_ns", 0.5) * 1e-9;
  const auto r = latqc::scaling_report(sc, atom, gate_epg, gate_time);

  std::string text = latqc::format_scaling_report(r);
  json doc = {{"qubits", r.qubits},
              {"power_per_beam_set_W", r.power_per_beam_set},
              {"kilowatt_flag", r.kilowatt_flag},
              {"n_A", r.n_A},
              {"storage_raman_rate_per_s", r.storage_raman_rate},
              {"total_scatter_rate_per_s", r.total_scatter_rate},
              {"storage_epg", r.storage_epg},
              {"gate_epg", r.gate_epg},
              {"steps_to_failure", r.steps_to_failure},
              {"gates_per_qubit", r.gates_per_qubit}};

  if (cfg.has("crosstalk.exponent")) {
    latqc::CrossTalkModel m;
    m.falloff_exponent = static_cast<int>(cfg.get_int("crosstalk.exponent", 6));
    m.threshold = cfg.get_number("crosstalk.threshold", 1e-6);
    const auto d =
        latqc::crosstalk_density(m, cfg.get_number("crosstalk.reference", 1.0));
    char line[128];
    std::snprintf(line, sizeof(line),
                  "  crosstalk min separation   %d sites\n"
                  "  crosstalk atoms per gate   %.1f\n",
                  d.min_separation_sites, d.atoms_per_gate);
    text += line;
    doc["crosstalk"] = {{"min_separation_sites", d.min_separation_sites},
                        {"atoms_per_gate", d.atoms_per_gate}};
  }

  write_text(out_dir / "scaling.txt", text);
  write_json(out_dir / "scaling.json", doc);
  std::fputs(text.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"error-budget and gate-dynamics calculations for addressable "
               "optical-lattice qubits"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = ".";
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "TOML run configuration");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "optimizer seed");
  app.add_option("--set", overrides, "override config keys (section.key=value)")
      ->take_all();

  auto* sweep = app.add_subcommand("sweep", "wavelength sweep of the optical response");
  sweep->fallthrough();
  auto* budget = app.add_subcommand("budget", "per-mechanism gate error table");
  budget->fallthrough();
  std::string budget_gate = "microwave";
  bool with_sim = false;
  budget->add_option("gate", budget_gate, "raman or microwave")
      ->check(CLI::IsMember({"raman", "microwave"}));
  budget->add_flag("--simulate", with_sim,
                   "fill the simulation column with propagator runs");
  auto* optimize = app.add_subcommand("optimize", "minimize the Raman gate EPG");
  optimize->fallthrough();
  auto* surface = app.add_subcommand("surface", "EPG surface over (a, w0)");
  surface->fallthrough();
  auto* simulate = app.add_subcommand("simulate", "microwave gate dynamics");
  simulate->fallthrough();
  auto* scaling = app.add_subcommand("scaling", "lattice size and power report");
  scaling->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& o : overrides) cfg.set_override(o);

    fs::path out(out_dir);
    fs::create_directories(out);

    if (sweep->parsed()) return run_sweep(cfg, out);
    if (budget->parsed()) {
      if (budget_gate == "raman") return run_budget_raman(cfg, out);
      return run_budget_microwave(cfg, out, with_sim);
    }
    if (optimize->parsed()) return run_optimize(cfg, out, seed);
    if (surface->parsed()) return run_surface(cfg, out);
    if (simulate->parsed()) return run_simulate(cfg, out);
    if (scaling->parsed()) return run_scaling(cfg, out);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const latqc::AtomDataError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 3;
  }
}
