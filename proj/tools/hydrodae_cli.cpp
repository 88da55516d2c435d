#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "hydrodae/ascii_grid.hpp"
#include "hydrodae/ensemble.hpp"
#include "hydrodae/errors.hpp"
#include "hydrodae/metrics.hpp"
#include "hydrodae/report.hpp"
#include "hydrodae/scenario.hpp"
#include "hydrodae/uncertainty.hpp"

namespace fs = std::filesystem;
using namespace hydrodae;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Args {
  std::string config;
  bool toy = false;
  std::string out;
  std::string engine;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
};

void log(const std::string& msg) { std::cerr << "[hydrodae] " << msg << '\n'; }

Scenario resolve_scenario(const Args& a) {
  Scenario s = !a.config.empty() ? load_scenario(a.config) : (a.toy ? toy_vtilted_scenario() : default_vtilted_scenario());
  if (!a.engine.empty()) {
    s.engine = parse_engine(a.engine);
    s.ensemble_engine = s.engine;
  }
  if (a.samples) {
    if (*a.samples < 2) throw ConfigError("--samples: must be >= 2");
    s.ensemble_samples = *a.samples;
  }
  if (a.seed) s.seed = *a.seed;
  return s;
}

fs::path output_dir(const Args& a, const Scenario& s) {
  const fs::path dir = a.out.empty() ? fs::path(s.output_dir) : fs::path(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

SimulationResult run_engine(const Model& m, const Scenario& s, Engine engine, const SolverSettings& settings,
                            const SimulationOptions& opt = {}) {
  log("running " + std::string(to_string(engine)) + " engine: " + std::to_string(m.grid.num_cells()) + " cells, " +
      std::to_string(settings.horizon_steps) + " steps of " + format_double(settings.dt) + " s");
  return engine == Engine::dae ? simulate(m.system, s.rain, m.params, settings, opt)
                               : explicit_baseline_simulate(m.system, s.rain, m.params, settings, opt,
                                                            s.explicit_settings);
}

/// Nominal DAE trajectory with every state kept; cached on disk by scenario hash.
std::vector<Eigen::VectorXd> nominal_trajectory(const Model& m, const Scenario& s, const fs::path& dir) {
  SolverSettings settings = s.solver_settings();
  settings.store_stride = 1;
  const fs::path cache = dir / ("trajectory_" + scenario_hash(s) + ".bin");
  if (auto cached = load_trajectory(cache, m.system.state_size(), settings.horizon_steps + 1)) {
    log("using cached trajectory " + cache.filename().string());
    return std::move(*cached);
  }
  SimulationResult r = run_engine(m, s, Engine::dae, settings);
  save_trajectory(cache, r.states);
  return std::move(r.states);
}

std::vector<double> outlet_series(const Model& m, const std::vector<Eigen::VectorXd>& traj) {
  std::vector<double> q;
  q.reserve(traj.size());
  for (const auto& x : traj) q.push_back(m.system.boundary_outflow(x));
  return q;
}

void write_field(const fs::path& path, const CellGrid& grid, const Eigen::VectorXd& values) {
  AsciiGrid a = field_to_ascii(grid, values);
  write_ascii_grid(path, a);
}

Eigen::VectorXd field(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

int cmd_generate(const Args& a) {
  const Scenario s = resolve_scenario(a);
  const fs::path dir = output_dir(a, s);
  const CellGrid g = build_scenario_grid(s);
  save_scenario(dir / "scenario.json", s);
  write_field(dir / "dem.asc", g, field(g.z));
  write_field(dir / "n.asc", g, field(g.n));
  write_field(dir / "k_s.asc", g, field(g.k_s));
  write_field(dir / "psi_f.asc", g, field(g.psi_f));
  write_field(dir / "theta_s.asc", g, field(g.theta_s));
  write_field(dir / "theta_i.asc", g, field(g.theta_i));
  log("wrote " + std::to_string(g.nx) + " x " + std::to_string(g.ny) + " grid to " + dir.string());
  return 0;
}

int cmd_simulate(const Args& a) {
  const Scenario s = resolve_scenario(a);
  const fs::path dir = output_dir(a, s);
  const Model m(s);
  const SolverSettings settings = s.solver_settings();
  const int K = m.grid.num_cells();
  Eigen::VectorXd h_max = Eigen::VectorXd::Zero(K);
  SimulationOptions opt;
  opt.observer = [&](int, const Eigen::VectorXd& x) { h_max = h_max.cwiseMax(x.head(K)); };
  const SimulationResult r = run_engine(m, s, s.engine, settings, opt);

  write_text_file(dir / "hydrograph.csv", hydrograph_csv(r));
  write_field(dir / "h_max.asc", m.grid, h_max);
  write_field(dir / "h_final.asc", m.grid, r.final_state.head(K));
  Report rep;
  rep.command = "simulate";
  rep.runs.push_back(summarize_run("nominal", s.engine, r, settings.dt));
  json j = report_to_json(rep);
  j["scenario_hash"] = scenario_hash(s);
  write_text_file(dir / "report.json", j.dump(2) + "\n");
  log("peak outlet discharge " + format_double(rep.runs[0].peak_q) + " m3/s at t = " +
      format_double(rep.runs[0].t_peak_s) + " s; mass closure " + format_double(r.ledger.closure_error()));
  return 0;
}

void check_covariance_size(const Scenario& s, int cells) {
  if (cells > s.covariance_max_cells)
    throw ConfigError("covariance.max_cells: grid has " + std::to_string(cells) +
                      " cells, above the dense-covariance limit of " + std::to_string(s.covariance_max_cells));
}

int cmd_propagate(const Args& a) {
  const Scenario s = resolve_scenario(a);
  const fs::path dir = output_dir(a, s);
  const Model m(s);
  const int K = m.grid.num_cells();
  check_covariance_size(s, K);
  const SolverSettings settings = s.solver_settings();
  const std::vector<Eigen::VectorXd> traj = nominal_trajectory(m, s, dir);
  const std::vector<double> q = outlet_series(m, traj);
  const int peak = peak_index(q);
  const int N = settings.horizon_steps;
  const StateLayout& L = m.system.layout();

  // Outlet discharge is the sum of free-drainage components.
  Eigen::VectorXd outlet_sel = Eigen::VectorXd::Zero(L.size());
  for (int c = 0; c < K; ++c)
    for (int d = 0; d < 4; ++d)
      if (m.routing.face[d][c] == FaceKind::free_drainage) outlet_sel[L.index(discharge_kind(static_cast<Direction>(d)), c)] = 1.0;
  std::vector<double> q_var(N + 1, 0.0);
  Eigen::VectorXd var_peak = Eigen::VectorXd::Zero(L.size());

  Algorithm1Options opt;
  opt.window = s.covariance_window;
  opt.variance_stride = settings.store_stride;
  opt.on_step = [&](int k, const Eigen::MatrixXd& Kx) {
    q_var[k] = outlet_sel.dot(Kx * outlet_sel);
    if (k == peak) var_peak = Kx.diagonal();
    for (int dk : s.covariance_dump_steps)
      if (dk == k) write_covariance_dump(dir / ("cov_step_" + std::to_string(k) + ".bin"), Kx);
  };
  log("propagating covariance over " + std::to_string(N) + " steps (n_x = " + std::to_string(L.size()) + ")");
  const CovarianceRun run = run_algorithm1(m.system, traj, m.params, s.rain, settings.dt, m.measurement,
                                           s.uncertainty, opt);

  std::vector<Eigen::VectorXd> nominal;
  for (int k : run.steps) nominal.push_back(traj[k]);
  write_interval_csv(dir / "intervals.csv", run, nominal, settings.dt, L, s.uncertainty.interval_family,
                     s.uncertainty.level);
  std::ostringstream os;
  os << "t_s,Q_outlet_m3s,sigma,lo,hi\n";
  for (int k = 0; k <= N; ++k) {
    const double v = std::max(q_var[k], 0.0);
    const Interval iv = confidence_interval(q[k], v, s.uncertainty.interval_family, s.uncertainty.level);
    os << format_double(k * settings.dt) << ',' << format_double(q[k]) << ',' << format_double(std::sqrt(v)) << ','
       << format_double(iv.lo) << ',' << format_double(iv.hi) << '\n';
  }
  write_text_file(dir / "outlet_interval.csv", os.str());
  write_field(dir / "sigma_h_peak.asc", m.grid, var_peak.head(K).cwiseMax(0.0).cwiseSqrt());
  write_field(dir / "sigma_h_final.asc", m.grid, run.variances.back().head(K).cwiseMax(0.0).cwiseSqrt());

  Report rep;
  rep.command = "propagate";
  json j = report_to_json(rep);
  j["scenario_hash"] = scenario_hash(s);
  j["covariance"] = {{"steps", N},
                     {"peak_step", peak},
                     {"gauges", m.measurement.rows()},
                     {"window", s.covariance_window},
                     {"max_condition", run.max_condition},
                     {"runtime_s", run.runtime_s}};
  write_text_file(dir / "report.json", j.dump(2) + "\n");
  log("covariance done in " + format_double(run.runtime_s) + " s, max condition " + format_double(run.max_condition));
  return 0;
}

int cmd_mc(const Args& a) {
  const Scenario s = resolve_scenario(a);
  const fs::path dir = output_dir(a, s);
  const Model m(s);
  const int K = m.grid.num_cells();
  const SolverSettings settings = s.solver_settings();

  const SimulationResult nominal = run_engine(m, s, Engine::dae, settings);
  const int snap = s.snapshot_step >= 0 ? s.snapshot_step : nominal.peak_step();
  if (snap > settings.horizon_steps) throw ConfigError("ensemble.snapshot_step: beyond the horizon");

  const EnsembleSpec spec = s.ensemble_spec();
  const std::vector<ModelParameters> real = lhs_sample(spec, m.params);
  EnsembleOptions opt;
  opt.engine = s.ensemble_engine;
  opt.snapshot_steps = {snap};
  opt.explicit_settings = s.explicit_settings;
  log("running " + std::to_string(spec.n_samples) + " " + std::string(to_string(opt.engine)) +
      " realizations (seed " + std::to_string(spec.seed) + ")");
  const EnsembleStats st = run_ensemble(m.system, s.rain, real, settings, opt);

  write_text_file(dir / "ensemble.csv", ensemble_csv(st, settings.dt));
  std::ostringstream os;
  os << "t_s,Q_mean,Q_var,Q_min,Q_max\n";
  for (Eigen::Index k = 0; k < st.q_mean.size(); ++k)
    os << format_double(k * settings.dt) << ',' << format_double(st.q_mean[k]) << ',' << format_double(st.q_var[k])
       << ',' << format_double(st.q_min[k]) << ',' << format_double(st.q_max[k]) << '\n';
  write_text_file(dir / "mc_summary.csv", os.str());
  const Eigen::VectorXd sigma_mc = st.h_var[0].cwiseMax(0.0).cwiseSqrt();
  write_field(dir / "sigma_mc_h.asc", m.grid, sigma_mc);

  Report rep;
  rep.command = "mc";
  rep.runs.push_back(summarize_run("nominal", Engine::dae, nominal, settings.dt));
  json extra = {{"samples", spec.n_samples},
                {"seed", spec.seed},
                {"engine", to_string(opt.engine)},
                {"mode", to_string(spec.mode)},
                {"failed", st.failed},
                {"snapshot_step", snap}};

  int status = 0;
  if (K <= s.covariance_max_cells) {
    // The ensemble has no measurements, so the linearized estimate is run
    // without gauges for a like-for-like comparison.
    const std::vector<Eigen::VectorXd> traj = nominal_trajectory(m, s, dir);
    const MeasurementMap none = build_measurement_matrix({}, m.grid);
    Eigen::VectorXd var_snap = Eigen::VectorXd::Zero(K);
    Algorithm1Options aopt;
    aopt.variance_stride = 0;
    aopt.on_step = [&](int k, const Eigen::MatrixXd& Kx) {
      if (k == snap) var_snap = Kx.diagonal().head(K);
    };
    run_algorithm1(m.system, traj, m.params, s.rain, settings.dt, none, s.uncertainty, aopt);
    const Eigen::VectorXd sigma_pse = var_snap.cwiseMax(0.0).cwiseSqrt();
    write_field(dir / "sigma_pse_h.asc", m.grid, sigma_pse);
    try {
      rep.fit = loglog_fit(sigma_pse, sigma_mc);
      write_text_file(dir / "fit.json", fit_to_json(*rep.fit).dump(2) + "\n");
      log("log-log fit: slope " + format_double(rep.fit->a) + ", R2 " + format_double(rep.fit->r2));
    } catch (const FitError& e) {
      write_text_file(dir / "fit.json", json{{"error", e.what()}}.dump(2) + "\n");
      log(std::string("fit failed: ") + e.what());
      status = kExitNumerical;
    }
  } else {
    log("grid exceeds covariance.max_cells; skipping the linearized comparison");
  }
  json j = report_to_json(rep);
  j["scenario_hash"] = scenario_hash(s);
  j["ensemble"] = extra;
  write_text_file(dir / "report.json", j.dump(2) + "\n");
  return status;
}

int cmd_compare(const Args& a) {
  const Scenario s = resolve_scenario(a);
  const fs::path dir = output_dir(a, s);
  const Model m(s);
  const SolverSettings settings = s.solver_settings();
  const SimulationResult dae = run_engine(m, s, Engine::dae, settings);
  const SimulationResult ex = run_engine(m, s, Engine::explicit_euler, settings);
  const HydrographMetrics met = compare_hydrographs(ex.outlet_q, dae.outlet_q, dae.time_s);

  std::ostringstream os;
  os << "t_s,Q_dae_m3s,Q_explicit_m3s\n";
  for (std::size_t k = 0; k < dae.time_s.size(); ++k)
    os << format_double(dae.time_s[k]) << ',' << format_double(dae.outlet_q[k]) << ',' << format_double(ex.outlet_q[k])
       << '\n';
  write_text_file(dir / "compare.csv", os.str());
  Report rep;
  rep.command = "compare";
  rep.runs.push_back(summarize_run("dae", Engine::dae, dae, settings.dt));
  rep.runs.push_back(summarize_run("explicit", Engine::explicit_euler, ex, settings.dt));
  rep.metrics = met;
  json j = report_to_json(rep);
  j["scenario_hash"] = scenario_hash(s);
  write_text_file(dir / "report.json", j.dump(2) + "\n");
  log("e_Q_peak " + format_double(met.e_q_peak) + ", e_t_peak " + format_double(met.e_t_peak) + ", RMSE " +
      format_double(met.rmse_q) + " m3/s");
  return 0;
}

void add_common(CLI::App* sub, Args& a, bool engine, bool ensemble) {
  sub->add_option("--config", a.config, "Scenario JSON file")->check(CLI::ExistingFile);
  sub->add_flag("--toy", a.toy, "Use the small V-tilted tile when no --config is given");
  sub->add_option("--out", a.out, "Output directory (default: scenario 'output')");
  if (engine) sub->add_option("--engine", a.engine, "Time stepper")->check(CLI::IsMember({"dae", "explicit"}));
  if (ensemble) {
    sub->add_option("--samples", a.samples, "Number of LHS realizations");
    sub->add_option("--seed", a.seed, "Sampling seed");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusive-wave overland flow with Green-Ampt infiltration: simulation and uncertainty"};
  app.require_subcommand(1);
  Args args;
  auto* gen = app.add_subcommand("generate-vtilted", "Write the V-tilted benchmark scenario and rasters");
  auto* sim = app.add_subcommand("simulate", "Run one simulation and export the hydrograph");
  auto* prop = app.add_subcommand("propagate", "Propagate input and parameter covariance along the nominal run");
  auto* mc = app.add_subcommand("mc", "Latin hypercube Monte Carlo ensemble");
  auto* cmp = app.add_subcommand("compare", "Compare the DAE and explicit engines");
  add_common(gen, args, false, false);
  add_common(sim, args, true, false);
  add_common(prop, args, false, false);
  add_common(mc, args, true, true);
  add_common(cmp, args, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_generate(args);
    if (sim->parsed()) return cmd_simulate(args);
    if (prop->parsed()) return cmd_propagate(args);
    if (mc->parsed()) return cmd_mc(args);
    if (cmp->parsed()) return cmd_compare(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RankError& e) {
    std::cerr << "numerical failure: " << e.what() << " (condition estimate " << e.condition_estimate() << ")\n";
    return kExitNumerical;
  } catch (const StepFailure& e) {
    std::cerr << "numerical failure at step " << e.step() << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const FitError& e) {
    std::cerr << "fit failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
