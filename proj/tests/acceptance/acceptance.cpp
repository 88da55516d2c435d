// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and
// budgets are fixed below; a failing criterion makes the exit status 1.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hydrodae/dae.hpp"
#include "hydrodae/ensemble.hpp"
#include "hydrodae/errors.hpp"
#include "hydrodae/metrics.hpp"
#include "hydrodae/report.hpp"
#include "hydrodae/scenario.hpp"
#include "hydrodae/uncertainty.hpp"

namespace fs = std::filesystem;
using namespace hydrodae;

namespace {

// Pinned tolerances and budgets.
constexpr int kC1States = 100;
constexpr double kC1Budget = 5.0;
constexpr int kC2States = 20;
constexpr double kC2Tol = 1e-5;
constexpr double kC2Budget = 30.0;
constexpr double kC3Closure = 1e-6;
constexpr double kC3Budget = 300.0;
constexpr int kC4MaxIters = 15;
constexpr double kC5Tol = 1e-12;
constexpr int kC5Steps = 200;
constexpr double kC6PsdRel = 1e-10;
constexpr double kC6cRel = 1e-10;
constexpr int kC6cSteps = 60;
constexpr int kC8Samples = 200;
constexpr std::uint64_t kC8Seed = 42;
constexpr double kC8MinR2 = 0.8;
constexpr double kC8SlopeLo = 0.7;
constexpr double kC8SlopeHi = 1.5;
constexpr double kC8Budget = 900.0;
constexpr double kC9TPeak = 0.15;
constexpr double kC9QPeak = 0.30;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Tilted, slightly uneven plane with one outlet in the bottom-left corner.
GridFields plane(int nx, int ny, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  GridFields f;
  f.nx = nx;
  f.ny = ny;
  f.dx = 10.0;
  f.dy = 12.5;
  const std::size_t N = static_cast<std::size_t>(nx) * ny;
  f.z.resize(N);
  for (int r = 0; r < ny; ++r)
    for (int c = 0; c < nx; ++c) f.z[r * nx + c] = 0.03 * c * f.dx + 0.02 * (ny - 1 - r) * f.dy + jitter(rng);
  f.n.assign(N, 0.05);
  f.k_s.assign(N, 4.1667e-6);
  f.psi_f.assign(N, 0.05);
  f.theta_s.assign(N, 0.35);
  f.theta_i.assign(N, 0.15);
  f.outlets = {{ny - 1, 0}};
  f.outlet_slope = 0.02;
  return f;
}

Eigen::VectorXd random_state(const DescriptorSystem& sys, const CellGrid& g, std::mt19937_64& rng, double h_lo,
                             double h_hi, double dry_fraction = 0.0) {
  const int K = sys.cells();
  std::uniform_real_distribution<double> uh(h_lo, h_hi), uf(1e-3, 2e-2), u(0.0, 1.0);
  Eigen::VectorXd h(K), F(K);
  for (int c = 0; c < K; ++c) {
    h[c] = u(rng) < dry_fraction ? 0.0 : uh(rng);
    F[c] = uf(rng);
  }
  const Eigen::VectorXd n = Eigen::Map<const Eigen::VectorXd>(g.n.data(), K);
  return sys.consistent_state(h, F, n);
}

// Toy tile: mid-length cell of the central channel.
int toy_channel_cell(const Model& m) { return m.grid.cell_at(m.grid.ny / 2, m.grid.nx / 2); }

Outcome c1_index_one() {
  const auto t0 = std::chrono::steady_clock::now();
  const CellGrid g = make_grid(plane(5, 5, 11));
  const RoutingOperators rt = build_routing_operators(g);
  const DescriptorSystem sys(g, rt);
  const StateLayout& L = sys.layout();
  const ThetaVector th = ThetaVector::nominal(g, 2e-5);
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < kC1States; ++trial) {
    const Eigen::VectorXd xp = random_state(sys, g, rng, 0.0, 0.2, 0.2);
    const Eigen::VectorXd x = random_state(sys, g, rng, 0.0, 0.2, 0.2);
    const SparseRowMatrix J = sys.jacobian(x, xp, th, 1.0);
    const int a0 = L.differential_size();
    for (int row = a0; row < L.size(); ++row) {
      bool diag = false;
      for (SparseRowMatrix::InnerIterator it(J, row); it; ++it) {
        if (it.col() < a0) continue;
        const double expect = it.col() == row ? 1.0 : 0.0;
        diag = diag || it.col() == row;
        worst = std::max(worst, std::abs(it.value() - expect));
      }
      if (!diag) worst = std::max(worst, 1.0);
    }
  }
  const double t = seconds_since(t0);
  return {worst == 0.0 && t < kC1Budget,
          fmt("%d states on 5x5, max |dg/dx_a - I| = %g, %.2f s (budget %.0f s)", kC1States, worst, t, kC1Budget)};
}

Outcome c2_jacobian() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int size : {3, 5}) {
    const CellGrid g = make_grid(plane(size, size, 20 + size));
    const RoutingOperators rt = build_routing_operators(g);
    const DescriptorSystem sys(g, rt);
    const ThetaVector th = ThetaVector::nominal(g, 2e-5);
    std::mt19937_64 rng(200 + size);
    for (int trial = 0; trial < kC2States; ++trial) {
      const Eigen::VectorXd xp = random_state(sys, g, rng, 2e-3, 5e-2);
      const Eigen::VectorXd x = random_state(sys, g, rng, 2e-3, 5e-2);
      const Eigen::MatrixXd J = Eigen::MatrixXd(sys.jacobian(x, xp, th, 2.0, Exec::serial));
      Eigen::MatrixXd Jfd(J.rows(), J.cols());
      for (int j = 0; j < x.size(); ++j) {
        const double step = 1e-7 * std::max(std::abs(x[j]), 1e-3);
        Eigen::VectorXd a = x, b = x;
        a[j] += step;
        b[j] -= step;
        Jfd.col(j) = (sys.residual(a, xp, th, 2.0, Exec::serial) - sys.residual(b, xp, th, 2.0, Exec::serial)) /
                     (2 * step);
      }
      worst = std::max(worst, (J - Jfd).cwiseAbs().maxCoeff() / J.cwiseAbs().maxCoeff());
    }
  }
  const double t = seconds_since(t0);
  return {worst <= kC2Tol && t < kC2Budget,
          fmt("%d states each on 3x3 and 5x5, max |J - J_fd| / max |J| = %.3g (tol %g), %.2f s", kC2States, worst,
              kC2Tol, t)};
}

// Full V-tilted run shared by criteria 3, 4 and 11.
struct FullRun {
  SimulationResult result;
  double wall = 0.0;
};

FullRun full_vtilted_run() {
  const Scenario s = default_vtilted_scenario();
  const Model m(s);
  SolverSettings settings = s.solver_settings();
  settings.store_stride = 0;
  const auto t0 = std::chrono::steady_clock::now();
  FullRun r{simulate(m.system, s.rain, m.params, settings), 0.0};
  r.wall = seconds_since(t0);
  return r;
}

const FullRun& cached_full_run() {
  static const FullRun run = full_vtilted_run();
  return run;
}

Outcome c3_mass() {
  const FullRun& r = cached_full_run();
  const double e = r.result.ledger.closure_error();
  return {e <= kC3Closure && r.wall <= kC3Budget,
          fmt("V-tilted 81x50, dt = 1 s, %d steps: closure %.3g (tol %g), %.1f s (budget %.0f s)", r.result.steps(), e,
              kC3Closure, r.wall, kC3Budget)};
}

Outcome c4_newton() {
  const FullRun& r = cached_full_run();
  const auto& its = r.result.newton_iterations;
  const int worst = its.empty() ? 0 : *std::max_element(its.begin(), its.end());
  // A step that misses the 1e-10 tolerance throws, so reaching here means all converged.
  return {worst <= kC4MaxIters && static_cast<int>(its.size()) == r.result.steps(),
          fmt("%zu steps converged at 1e-10, max %d iterations (limit %d)", its.size(), worst, kC4MaxIters)};
}

GridFields single_cell() {
  GridFields f;
  f.nx = f.ny = 1;
  f.dx = f.dy = 10.0;
  f.z = {0.0};
  f.n = {0.03};
  f.k_s = {1e-6};
  f.psi_f = {0.0};
  f.theta_s = {0.3};
  f.theta_i = {0.3};
  return f;
}

Outcome c5_one_cell() {
  const CellGrid g = make_grid(single_cell());
  const RoutingOperators rt = build_routing_operators(g);
  const DescriptorSystem sys(g, rt, {}, SystemOptions{false});
  const ModelParameters prm = ModelParameters::from_grid(g);
  const double mm_h = 50.0, R = mm_h * kMmPerHourToMs, dt = 5.0;
  SolverSettings s;
  s.dt = dt;
  s.horizon_steps = kC5Steps;
  const SimulationResult dae = simulate(sys, Hyetograph::constant(mm_h), prm, s);
  const SimulationResult ex = explicit_baseline_simulate(sys, Hyetograph::constant(mm_h), prm, s);
  double e_dae = 0.0, e_ex = 0.0;
  for (int k = 0; k <= kC5Steps; ++k) {
    e_dae = std::max(e_dae, std::abs(dae.states[k][0] - k * dt * R));
    e_ex = std::max(e_ex, std::abs(ex.states[k][0] - k * dt * R));
  }
  return {e_dae <= kC5Tol && e_ex <= kC5Tol,
          fmt("%d steps, max |h - k dt R|: dae %.3g m, explicit %.3g m (tol %g)", kC5Steps, e_dae, e_ex, kC5Tol)};
}

// Toy-tile nominal trajectory with every state kept.
struct ToyRun {
  Scenario scenario = toy_vtilted_scenario();
  Model model{scenario};
  std::vector<Eigen::VectorXd> traj;
  std::vector<double> q;
  int peak = 0;

  ToyRun() {
    SolverSettings s = scenario.solver_settings();
    s.store_stride = 1;
    traj = simulate(model.system, scenario.rain, model.params, s).states;
    for (const auto& x : traj) q.push_back(model.system.boundary_outflow(x));
    peak = peak_index(q);
  }
};

const ToyRun& toy() {
  static const ToyRun run;
  return run;
}

// Propagate run of criterion 6b, also used by criterion 10.
struct PropagateRun {
  CovarianceRun run;
  double worst_psd = 0.0;  // max over steps of -lambda_min / trace
  int channel_cell = 0;
  double var_peak = 0.0, var_final = 0.0;
};

PropagateRun toy_propagate() {
  const ToyRun& t = toy();
  PropagateRun p;
  p.channel_cell = toy_channel_cell(t.model);
  Algorithm1Options opt;
  opt.on_step = [&](int k, const Eigen::MatrixXd& Kx) {
    const double tr = Kx.trace();
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Kx, Eigen::EigenvaluesOnly).eigenvalues()[0];
    if (tr > 0.0) p.worst_psd = std::max(p.worst_psd, -lmin / tr);
    else if (lmin < 0.0) p.worst_psd = std::max(p.worst_psd, 1.0);
    if (k == t.peak) p.var_peak = Kx(p.channel_cell, p.channel_cell);
  };
  p.run = run_algorithm1(t.model.system, t.traj, t.model.params, t.scenario.rain, t.scenario.solver.dt,
                         t.model.measurement, t.scenario.uncertainty, opt);
  p.var_final = p.run.variances.back()[p.channel_cell];
  return p;
}

const PropagateRun& cached_propagate() {
  static const PropagateRun run = toy_propagate();
  return run;
}

Outcome c6_covariance() {
  const ToyRun& t = toy();
  // (a) zero uncertainty stays at the zero fixed point.
  double zero_max = 0.0;
  Algorithm1Options zopt;
  zopt.variance_stride = 0;
  zopt.on_step = [&](int, const Eigen::MatrixXd& Kx) { zero_max = std::max(zero_max, Kx.cwiseAbs().maxCoeff()); };
  run_algorithm1(t.model.system, t.traj, t.model.params, t.scenario.rain, t.scenario.solver.dt, t.model.measurement,
                 UncertaintySpec::none(), zopt);
  const bool a = zero_max == 0.0;

  // (b) PSD along the toy propagate run.
  const PropagateRun& p = cached_propagate();
  const bool b = p.worst_psd <= kC6PsdRel;

  // (c) one closed cell, no infiltration: Var h_k = k (dt CV R)^2.
  const CellGrid g = make_grid(single_cell());
  const RoutingOperators rt = build_routing_operators(g);
  const DescriptorSystem sys(g, rt, {}, SystemOptions{false});
  const ModelParameters prm = ModelParameters::from_grid(g);
  const double mm_h = 30.0, R = mm_h * kMmPerHourToMs, dt = 10.0;
  SolverSettings s;
  s.dt = dt;
  s.horizon_steps = kC6cSteps;
  const Hyetograph rain = Hyetograph::constant(mm_h);
  const std::vector<Eigen::VectorXd> traj = simulate(sys, rain, prm, s).states;
  const UncertaintySpec spec;
  const CovarianceRun cr =
      run_algorithm1(sys, traj, prm, rain, dt, build_measurement_matrix({}, g), spec);
  double worst_c = 0.0;
  for (std::size_t i = 1; i < cr.steps.size(); ++i) {
    const int k = cr.steps[i];
    const double expect = k * std::pow(dt * spec.rain.cv * R, 2);
    worst_c = std::max(worst_c, std::abs(cr.variances[i][0] - expect) / expect);
  }
  const bool c = worst_c <= kC6cRel && cr.steps.size() == static_cast<std::size_t>(kC6cSteps + 1);

  return {a && b && c, fmt("(a) zero-uncertainty max |K| = %g; (b) max -lambda_min/trace = %.3g over %d steps "
                           "(tol %g); (c) one-cell variance rel. error %.3g (tol %g)",
                           zero_max, p.worst_psd, static_cast<int>(t.traj.size()) - 1, kC6PsdRel, worst_c, kC6cRel)};
}

Outcome c7_conditioning() {
  const ToyRun& t = toy();
  const int cell = toy_channel_cell(t.model);
  const int idx = t.model.system.layout().index(StateKind::h, cell);
  const auto variance_at_gauge = [&](const std::vector<Gauge>& gauges) {
    const CovarianceRun r = run_algorithm1(t.model.system, t.traj, t.model.params, t.scenario.rain,
                                           t.scenario.solver.dt, build_measurement_matrix(gauges, t.model.grid),
                                           t.scenario.uncertainty);
    std::vector<double> v;
    for (const auto& d : r.variances) v.push_back(d[idx]);
    return v;
  };
  const std::vector<double> gauged = variance_at_gauge({{cell, StateKind::h}});
  const std::vector<double> free = variance_at_gauge({});
  int above = 0, strict = 0, first_above = -1;
  double worst_ratio = 0.0, free_max_above = 0.0;
  for (std::size_t k = 0; k < gauged.size(); ++k) {
    if (gauged[k] > free[k]) {
      ++above;
      if (first_above < 0) first_above = static_cast<int>(k);
      worst_ratio = std::max(worst_ratio, gauged[k] / free[k]);
      free_max_above = std::max(free_max_above, free[k]);
    } else if (gauged[k] < free[k]) {
      ++strict;
    }
  }
  // The unweighted stacked solve only helps while the gauge noise is small
  // next to the model variance; report both so a failure reads directly.
  return {above == 0 && strict >= 1,
          fmt("depth gauge at channel cell %d: gauged > ungauged at %d of %zu steps (first %d, worst ratio %.4g, "
              "largest ungauged variance there %.3g m2 vs noise %.3g m2), strictly lower at %d",
              cell, above, gauged.size(), first_above, worst_ratio, free_max_above, t.scenario.uncertainty.var_h,
              strict)};
}

// Criterion 8 pipeline; writes its exports to `dir` when non-empty.
struct McRun {
  LogLogFit fit;
  double wall = 0.0;
  int failed = 0;
};

McRun toy_mc(const fs::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const ToyRun& t = toy();
  EnsembleSpec spec = t.scenario.ensemble_spec();
  spec.n_samples = kC8Samples;
  spec.seed = kC8Seed;
  spec.mode = SpatialMode::iid;
  const std::vector<ModelParameters> real = lhs_sample(spec, t.model.params);
  EnsembleOptions opt;
  opt.snapshot_steps = {t.peak};
  const EnsembleStats st = run_ensemble(t.model.system, t.scenario.rain, real, t.scenario.solver_settings(), opt);
  const Eigen::VectorXd sigma_mc = st.h_var[0].cwiseMax(0.0).cwiseSqrt();

  const int K = t.model.grid.num_cells();
  Eigen::VectorXd var_snap = Eigen::VectorXd::Zero(K);
  Algorithm1Options aopt;
  aopt.variance_stride = 0;
  aopt.on_step = [&](int k, const Eigen::MatrixXd& Kx) {
    if (k == t.peak) var_snap = Kx.diagonal().head(K);
  };
  run_algorithm1(t.model.system, t.traj, t.model.params, t.scenario.rain, t.scenario.solver.dt,
                 build_measurement_matrix({}, t.model.grid), t.scenario.uncertainty, aopt);
  const Eigen::VectorXd sigma_pse = var_snap.cwiseMax(0.0).cwiseSqrt();

  McRun r;
  r.fit = loglog_fit(sigma_pse, sigma_mc);
  r.failed = static_cast<int>(st.failed.size());
  r.wall = seconds_since(t0);
  if (!dir.empty()) {
    write_text_file(dir / "ensemble.csv", ensemble_csv(st, t.scenario.solver.dt));
    write_ascii_grid(dir / "sigma_mc_h.asc", field_to_ascii(t.model.grid, sigma_mc));
    write_ascii_grid(dir / "sigma_pse_h.asc", field_to_ascii(t.model.grid, sigma_pse));
    write_text_file(dir / "fit.json", fit_to_json(r.fit).dump(2) + "\n");
  }
  return r;
}

Outcome c8_mc() {
  const McRun r = toy_mc({});
  const LogLogFit& f = r.fit;
  return {f.r2 >= kC8MinR2 && f.a >= kC8SlopeLo && f.a <= kC8SlopeHi && r.wall <= kC8Budget,
          fmt("toy tile, %d LHS samples (iid, seed %llu, %d failed): slope %.4f in [%.1f, %.1f], R2 %.4f >= %.1f, "
              "%d pairs, %.1f s (budget %.0f s)",
              kC8Samples, static_cast<unsigned long long>(kC8Seed), r.failed, f.a, kC8SlopeLo, kC8SlopeHi, f.r2,
              kC8MinR2, f.n_pairs, r.wall, kC8Budget)};
}

Outcome c9_cross_solver() {
  const Scenario s = toy_vtilted_scenario();
  const Model m(s);
  SolverSettings settings = s.solver_settings();
  settings.store_stride = 0;
  const SimulationResult dae = simulate(m.system, s.rain, m.params, settings);
  const SimulationResult ex = explicit_baseline_simulate(m.system, s.rain, m.params, settings, {}, s.explicit_settings);
  const HydrographMetrics met = compare_hydrographs(ex.outlet_q, dae.outlet_q, dae.time_s);
  return {met.e_t_peak <= kC9TPeak && met.e_q_peak <= kC9QPeak,
          fmt("toy tile: e_t_peak %.4f (tol %.2f), e_Q_peak %.4f (tol %.2f)", met.e_t_peak, kC9TPeak, met.e_q_peak,
              kC9QPeak)};
}

Outcome c10_intervals() {
  const ToyRun& t = toy();
  const PropagateRun& p = cached_propagate();
  const UncertaintySpec& u = t.scenario.uncertainty;
  const double h_peak = t.traj[t.peak][p.channel_cell], h_final = t.traj.back()[p.channel_cell];
  const Interval ip = confidence_interval(h_peak, p.var_peak, u.interval_family, u.level);
  const Interval iff = confidence_interval(h_final, p.var_final, u.interval_family, u.level);
  const double w_peak = ip.hi - ip.lo, w_final = iff.hi - iff.lo;
  return {w_peak > w_final, fmt("channel cell %d: 95%% width %.4g m at peak step %d, %.4g m at final step %zu",
                                p.channel_cell, w_peak, t.peak, w_final, t.traj.size() - 1)};
}

void export_c3(const fs::path& dir) {
  const Scenario s = default_vtilted_scenario();
  const Model m(s);
  SolverSettings settings = s.solver_settings();
  settings.store_stride = 0;
  const SimulationResult r = simulate(m.system, s.rain, m.params, settings);
  write_text_file(dir / "hydrograph.csv", hydrograph_csv(r));
  write_ascii_grid(dir / "h_final.asc", field_to_ascii(m.grid, r.final_state.head(m.grid.num_cells())));
}

void export_c6(const fs::path& dir) {
  const ToyRun& t = toy();
  Algorithm1Options opt;
  opt.on_step = [&](int k, const Eigen::MatrixXd& Kx) {
    if (k == t.peak) write_covariance_dump(dir / "cov_peak.bin", Kx);
  };
  const CovarianceRun run = run_algorithm1(t.model.system, t.traj, t.model.params, t.scenario.rain,
                                           t.scenario.solver.dt, t.model.measurement, t.scenario.uncertainty, opt);
  std::vector<Eigen::VectorXd> nominal;
  for (int k : run.steps) nominal.push_back(t.traj[k]);
  write_interval_csv(dir / "intervals.csv", run, nominal, t.scenario.solver.dt, t.model.system.layout(),
                     t.scenario.uncertainty.interval_family, t.scenario.uncertainty.level);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome c11_determinism(const fs::path& work) {
  const fs::path root = work / "determinism";
  fs::remove_all(root);
  for (const char* run : {"a", "b"}) {
    const fs::path d = root / run;
    fs::create_directories(d / "c3");
    fs::create_directories(d / "c6");
    fs::create_directories(d / "c8");
    export_c3(d / "c3");
    export_c6(d / "c6");
    toy_mc(d / "c8");
  }
  int files = 0;
  std::vector<std::string> differing;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    ++files;
    const fs::path rel = fs::relative(e.path(), root / "a");
    if (slurp(e.path()) != slurp(root / "b" / rel)) differing.push_back(rel.string());
  }
  std::string list;
  for (const auto& d : differing) list += " " + d;
  return {differing.empty() && files > 0,
          fmt("%d exported files from criteria 3, 6 and 8 compared across two runs, %zu differ%s", files,
              differing.size(), list.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-11"};
  int only = 0;
  std::string work = "acceptance_work";
  app.add_option("--only", only, "Run a single criterion")->check(CLI::Range(1, 11));
  app.add_option("--work", work, "Scratch directory for exported files");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"index-1 algebraic block", c1_index_one},
      {"Jacobian vs central differences", c2_jacobian},
      {"mass conservation", c3_mass},
      {"Newton robustness", c4_newton},
      {"one-cell analytic oracle", c5_one_cell},
      {"covariance sanity", c6_covariance},
      {"measurement conditioning", c7_conditioning},
      {"Monte Carlo consistency", c8_mc},
      {"cross-solver agreement", c9_cross_solver},
      {"interval dynamics", c10_intervals},
      {"determinism", [&] { return c11_determinism(work); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && id != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s  %s: %s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
