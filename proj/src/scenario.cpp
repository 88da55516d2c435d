#include "hydrodae/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "hydrodae/ascii_grid.hpp"
#include "hydrodae/errors.hpp"

namespace hydrodae {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

/// Object reader that records which keys were consumed so unknown keys can
/// be reported with their full path.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  double num(const std::string& key, double def) { return has(key) ? num(key) : def; }
  double num(const std::string& key) {
    if (!has(key)) bad(at(key), "missing required number");
    const json& v = raw(key);
    if (!v.is_number()) bad(at(key), "expected a number");
    return v.get<double>();
  }
  long long integer(const std::string& key, long long def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_number_integer()) bad(at(key), "expected an integer");
    return v.get<long long>();
  }
  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_boolean()) bad(at(key), "expected true or false");
    return v.get<bool>();
  }
  std::string str(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_string()) bad(at(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) bad(at(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <class F>
auto wrap(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    bad(path, what);
  }
}

FieldSource parse_field(Obj& o, const std::string& key) {
  if (!o.has(key)) bad(o.at(key), "missing raster path or constant");
  const json& v = o.raw(key);
  FieldSource f;
  if (v.is_string()) f.path = v.get<std::string>();
  else if (v.is_number()) f.value = v.get<double>();
  else bad(o.at(key), "expected a file path or a number");
  if (f.is_file() && f.path.empty()) bad(o.at(key), "empty path");
  return f;
}

json field_json(const FieldSource& f) { return f.is_file() ? json(f.path) : json(f.value); }

QuantityUncertainty parse_quantity(Obj& parent, const std::string& key, QuantityUncertainty def) {
  if (!parent.has(key)) return def;
  Obj o(parent.raw(key), parent.at(key));
  QuantityUncertainty q;
  q.family = wrap(o.at("family"), [&] { return parse_family(o.str("family", std::string(to_string(def.family)))); });
  q.cv = o.num("cv", def.cv);
  o.finish();
  return q;
}

}  // namespace

int Scenario::horizon_steps() const {
  if (!(solver.dt > 0)) throw ConfigError("solver.dt: must be > 0");
  const double ratio = horizon_s / solver.dt;
  const double r = std::round(ratio);
  if (!(horizon_s >= 0) || std::abs(ratio - r) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("solver.horizon_s: must be a nonnegative multiple of solver.dt");
  return static_cast<int>(r);
}

SolverSettings Scenario::solver_settings() const {
  SolverSettings s = solver;
  s.horizon_steps = horizon_steps();
  s.validate();
  return s;
}

EnsembleSpec Scenario::ensemble_spec() const {
  EnsembleSpec e;
  e.n_samples = ensemble_samples;
  e.seed = seed;
  e.uncertainty = uncertainty;
  e.mode = ensemble_mode;
  return e;
}

Hyetograph default_hyetograph() {
  return {{0.0, 600.0, 1200.0, 1800.0, 2400.0, 3000.0}, {20.0, 45.0, 70.0, 45.0, 20.0, 0.0}};
}

std::vector<GaugeSpec> vtilted_gauges(const VTiltedParams& p, double spacing) {
  const GridFields f = vtilted_fields(p);
  const int step = std::max(1, static_cast<int>(std::lround(spacing / p.cell_size)));
  const int nh = static_cast<int>(std::lround(p.hillslope_width / p.cell_size));
  const int nc = static_cast<int>(std::lround(p.channel_width / p.cell_size));
  std::vector<GaugeSpec> g;
  for (int r = step / 2; r < f.ny; r += step)
    for (int c = step / 2; c < f.nx; c += step) {
      StateKind kind = StateKind::Q_down;
      if (c < nh) kind = StateKind::Q_right;
      else if (c >= nh + nc) kind = StateKind::Q_left;
      g.push_back({r, c, kind});
    }
  return g;
}

Scenario default_vtilted_scenario() {
  Scenario s;
  s.rain = default_hyetograph();
  s.gauges = vtilted_gauges(s.vtilted);
  s.solver.dt = 1.0;
  s.solver.store_stride = 60;
  s.horizon_s = 5400.0;
  return s;
}

Scenario toy_vtilted_scenario() {
  Scenario s;
  s.vtilted.hillslope_width = 100.0;
  s.vtilted.channel_width = 20.0;
  s.vtilted.length = 200.0;
  s.rain = default_hyetograph();
  s.gauges = vtilted_gauges(s.vtilted);
  s.solver.dt = 10.0;
  s.solver.store_stride = 1;
  s.horizon_s = 5400.0;
  return s;
}

Scenario parse_scenario(const json& j, const std::filesystem::path& base_dir) {
  Scenario s;
  s.base_dir = base_dir;
  Obj root(j, "");

  if (!root.has("grid")) bad("grid", "missing section");
  {
    Obj g(root.raw("grid"), "grid");
    const std::string type = g.str("type", "vtilted");
    if (type == "vtilted") {
      s.grid_type = GridType::vtilted;
      VTiltedParams& v = s.vtilted;
      v.cell_size = g.num("cell_size", v.cell_size);
      v.hillslope_width = g.num("hillslope_width", v.hillslope_width);
      v.channel_width = g.num("channel_width", v.channel_width);
      v.length = g.num("length", v.length);
      v.hillslope_n = g.num("hillslope_n", v.hillslope_n);
      v.channel_n = g.num("channel_n", v.channel_n);
      v.slope_x = g.num("slope_x", v.slope_x);
      v.slope_y = g.num("slope_y", v.slope_y);
      v.outlet_slope = g.num("outlet_slope", v.outlet_slope);
      v.k_s = g.num("k_s_mm_h", v.k_s / kMmPerHourToMs) * kMmPerHourToMs;
      v.psi_f = g.num("psi_f", v.psi_f);
      v.theta_i = g.num("theta_i", v.theta_i);
      v.theta_s = g.num("theta_s", v.theta_s);
    } else if (type == "raster") {
      s.grid_type = GridType::raster;
      RasterSource& r = s.raster;
      r.z = parse_field(g, "z");
      r.n = parse_field(g, "n");
      r.k_s = parse_field(g, "k_s");
      r.psi_f = parse_field(g, "psi_f");
      r.theta_s = parse_field(g, "theta_s");
      r.theta_i = parse_field(g, "theta_i");
      if (!r.z.is_file()) bad("grid.z", "elevation must be a raster file");
      r.outlet_slope = g.num("outlet_slope", r.outlet_slope);
      if (g.has("outlets")) {
        const json& arr = g.raw("outlets");
        if (!arr.is_array()) bad("grid.outlets", "expected a list of [row, col] pairs");
        for (std::size_t i = 0; i < arr.size(); ++i) {
          const json& p = arr[i];
          if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
            bad("grid.outlets[" + std::to_string(i) + "]", "expected [row, col]");
          r.outlets.emplace_back(p[0].get<int>(), p[1].get<int>());
        }
      }
    } else {
      bad("grid.type", "expected 'vtilted' or 'raster', got '" + type + "'");
    }
    g.finish();
  }

  if (!root.has("rain")) bad("rain", "missing section");
  {
    Obj r(root.raw("rain"), "rain");
    if (!r.has("hyetograph")) bad("rain.hyetograph", "missing list of [t_s, mm_h] pairs");
    const json& arr = r.raw("hyetograph");
    if (!arr.is_array() || arr.empty()) bad("rain.hyetograph", "expected a non-empty list of [t_s, mm_h] pairs");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const json& p = arr[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        bad("rain.hyetograph[" + std::to_string(i) + "]", "expected [t_s, mm_h]");
      s.rain.time_s.push_back(p[0].get<double>());
      s.rain.intensity_mm_h.push_back(p[1].get<double>());
    }
    wrap("rain.hyetograph", [&] { s.rain.validate(); return 0; });
    r.finish();
  }

  if (root.has("gauges")) {
    const json& arr = root.raw("gauges");
    if (!arr.is_array()) bad("gauges", "expected a list");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "gauges[" + std::to_string(i) + "]";
      Obj o(arr[i], path);
      GaugeSpec g;
      if (!o.has("row") || !o.has("col")) bad(path, "needs row and col");
      g.row = static_cast<int>(o.integer("row", 0));
      g.col = static_cast<int>(o.integer("col", 0));
      g.kind = wrap(path + ".kind", [&] { return parse_state_kind(o.str("kind", "h")); });
      o.finish();
      s.gauges.push_back(g);
    }
  }

  if (root.has("solver")) {
    Obj o(root.raw("solver"), "solver");
    SolverSettings& v = s.solver;
    v.dt = o.num("dt", v.dt);
    s.horizon_s = o.num("horizon_s", s.horizon_s);
    v.newton_tol = o.num("newton_tol", v.newton_tol);
    v.max_newton_iters = static_cast<int>(o.integer("max_newton_iters", v.max_newton_iters));
    v.damping = o.num("damping", v.damping);
    v.max_halvings = static_cast<int>(o.integer("max_halvings", v.max_halvings));
    v.store_stride = static_cast<int>(o.integer("store_stride", v.store_stride));
    s.infiltration = o.boolean("infiltration", s.infiltration);
    s.engine = wrap("solver.engine", [&] { return parse_engine(o.str("engine", "dae")); });
    o.finish();
  }
  if (root.has("explicit")) {
    Obj o(root.raw("explicit"), "explicit");
    s.explicit_settings.cfl = o.num("cfl", s.explicit_settings.cfl);
    s.explicit_settings.max_substeps = o.integer("max_substeps", s.explicit_settings.max_substeps);
    s.explicit_settings.blowup_depth = o.num("blowup_depth", s.explicit_settings.blowup_depth);
    o.finish();
    if (!(s.explicit_settings.cfl > 0)) bad("explicit.cfl", "must be > 0");
  }
  if (root.has("regularization")) {
    Obj o(root.raw("regularization"), "regularization");
    RegularizationConstants& r = s.regularization;
    r.h_smooth = o.num("h_smooth", r.h_smooth);
    r.h_0 = o.num("h_0", r.h_0);
    r.h_flow = o.num("h_flow", r.h_flow);
    r.v_max = o.num("v_max", r.v_max);
    r.F_min = o.num("F_min", r.F_min);
    r.eps_s = o.num("eps_s", r.eps_s);
    o.finish();
    wrap("regularization", [&] { r.validate(); return 0; });
  }
  if (root.has("uncertainty")) {
    Obj o(root.raw("uncertainty"), "uncertainty");
    UncertaintySpec& u = s.uncertainty;
    u.rain = parse_quantity(o, "rain", u.rain);
    u.roughness = parse_quantity(o, "roughness", u.roughness);
    u.k_s = parse_quantity(o, "k_s", u.k_s);
    u.psi_f = parse_quantity(o, "psi_f", u.psi_f);
    u.eta = parse_quantity(o, "eta", u.eta);
    if (o.has("noise")) {
      Obj n(o.raw("noise"), "uncertainty.noise");
      u.var_h = n.num("var_h", u.var_h);
      u.var_q = n.num("var_q", u.var_q);
      u.var_f = n.num("var_f", u.var_f);
      n.finish();
    }
    u.interval_family =
        wrap("uncertainty.interval_family", [&] { return parse_family(o.str("interval_family", "gaussian")); });
    u.level = o.num("level", u.level);
    o.finish();
    wrap("uncertainty", [&] { u.validate(); return 0; });
  }
  if (root.has("covariance")) {
    Obj o(root.raw("covariance"), "covariance");
    s.covariance_max_cells = static_cast<int>(o.integer("max_cells", s.covariance_max_cells));
    s.covariance_window = static_cast<int>(o.integer("window", s.covariance_window));
    if (o.has("dump_steps")) {
      const json& arr = o.raw("dump_steps");
      if (!arr.is_array()) bad("covariance.dump_steps", "expected a list of step indices");
      for (const json& v : arr) {
        if (!v.is_number_integer()) bad("covariance.dump_steps", "expected integers");
        s.covariance_dump_steps.push_back(v.get<int>());
      }
    }
    o.finish();
    if (s.covariance_max_cells < 1) bad("covariance.max_cells", "must be >= 1");
    if (s.covariance_window < 1 || s.covariance_window > 3) bad("covariance.window", "must be 1, 2 or 3");
  }
  if (root.has("ensemble")) {
    Obj o(root.raw("ensemble"), "ensemble");
    s.ensemble_samples = static_cast<int>(o.integer("samples", s.ensemble_samples));
    s.ensemble_mode = wrap("ensemble.mode", [&] { return parse_spatial_mode(o.str("mode", "correlated")); });
    s.ensemble_engine = wrap("ensemble.engine", [&] { return parse_engine(o.str("engine", "dae")); });
    s.snapshot_step = static_cast<int>(o.integer("snapshot_step", s.snapshot_step));
    o.finish();
    if (s.ensemble_samples < 2) bad("ensemble.samples", "must be >= 2");
  }
  s.output_dir = root.str("output", s.output_dir);
  if (root.has("seed")) {
    const json& v = root.raw("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      bad("seed", "expected a nonnegative integer");
    s.seed = v.get<std::uint64_t>();
  }
  root.finish();

  wrap("solver", [&] { return s.solver_settings(); });
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  if (s.grid_type == GridType::vtilted) {
    const VTiltedParams& v = s.vtilted;
    j["grid"] = {{"type", "vtilted"},
                 {"cell_size", v.cell_size},
                 {"hillslope_width", v.hillslope_width},
                 {"channel_width", v.channel_width},
                 {"length", v.length},
                 {"hillslope_n", v.hillslope_n},
                 {"channel_n", v.channel_n},
                 {"slope_x", v.slope_x},
                 {"slope_y", v.slope_y},
                 {"outlet_slope", v.outlet_slope},
                 {"k_s_mm_h", v.k_s / kMmPerHourToMs},
                 {"psi_f", v.psi_f},
                 {"theta_i", v.theta_i},
                 {"theta_s", v.theta_s}};
  } else {
    const RasterSource& r = s.raster;
    json outlets = json::array();
    for (auto [row, col] : r.outlets) outlets.push_back({row, col});
    j["grid"] = {{"type", "raster"},           {"z", field_json(r.z)},
                 {"n", field_json(r.n)},       {"k_s", field_json(r.k_s)},
                 {"psi_f", field_json(r.psi_f)}, {"theta_s", field_json(r.theta_s)},
                 {"theta_i", field_json(r.theta_i)}, {"outlets", outlets},
                 {"outlet_slope", r.outlet_slope}};
  }
  json hy = json::array();
  for (std::size_t i = 0; i < s.rain.time_s.size(); ++i) hy.push_back({s.rain.time_s[i], s.rain.intensity_mm_h[i]});
  j["rain"] = {{"hyetograph", hy}};
  json gauges = json::array();
  for (const GaugeSpec& g : s.gauges) gauges.push_back({{"row", g.row}, {"col", g.col}, {"kind", to_string(g.kind)}});
  j["gauges"] = gauges;
  j["solver"] = {{"dt", s.solver.dt},
                 {"horizon_s", s.horizon_s},
                 {"newton_tol", s.solver.newton_tol},
                 {"max_newton_iters", s.solver.max_newton_iters},
                 {"damping", s.solver.damping},
                 {"max_halvings", s.solver.max_halvings},
                 {"store_stride", s.solver.store_stride},
                 {"infiltration", s.infiltration},
                 {"engine", to_string(s.engine)}};
  j["explicit"] = {{"cfl", s.explicit_settings.cfl},
                   {"max_substeps", s.explicit_settings.max_substeps},
                   {"blowup_depth", s.explicit_settings.blowup_depth}};
  const RegularizationConstants& r = s.regularization;
  j["regularization"] = {{"h_smooth", r.h_smooth}, {"h_0", r.h_0},     {"h_flow", r.h_flow},
                         {"v_max", r.v_max},       {"F_min", r.F_min}, {"eps_s", r.eps_s}};
  const UncertaintySpec& u = s.uncertainty;
  auto q = [](const QuantityUncertainty& x) { return json{{"family", to_string(x.family)}, {"cv", x.cv}}; };
  j["uncertainty"] = {{"rain", q(u.rain)},
                      {"roughness", q(u.roughness)},
                      {"k_s", q(u.k_s)},
                      {"psi_f", q(u.psi_f)},
                      {"eta", q(u.eta)},
                      {"noise", {{"var_h", u.var_h}, {"var_q", u.var_q}, {"var_f", u.var_f}}},
                      {"interval_family", to_string(u.interval_family)},
                      {"level", u.level}};
  j["covariance"] = {{"max_cells", s.covariance_max_cells},
                     {"window", s.covariance_window},
                     {"dump_steps", s.covariance_dump_steps}};
  j["ensemble"] = {{"samples", s.ensemble_samples},
                   {"mode", to_string(s.ensemble_mode)},
                   {"engine", to_string(s.ensemble_engine)},
                   {"snapshot_step", s.snapshot_step}};
  j["output"] = s.output_dir;
  j["seed"] = s.seed;
  return j;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open scenario file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_scenario(j, path.parent_path());
}

void save_scenario(const std::filesystem::path& path, const Scenario& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << scenario_to_json(s).dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::vector<double> load_field(const FieldSource& f, const std::filesystem::path& base, int nx, int ny,
                               std::vector<std::uint8_t>* active) {
  if (!f.is_file()) return std::vector<double>(static_cast<std::size_t>(nx) * ny, f.value);
  const AsciiGrid g = load_ascii_grid(base / f.path, nx, ny);
  if (active) {
    const auto mask = g.active_mask();
    for (std::size_t i = 0; i < mask.size(); ++i) (*active)[i] = (*active)[i] && mask[i];
  }
  return g.values;
}

}  // namespace

CellGrid build_scenario_grid(const Scenario& s) {
  if (s.grid_type == GridType::vtilted) return build_vtilted(s.vtilted);
  const RasterSource& r = s.raster;
  const AsciiGrid z = read_ascii_grid(s.base_dir / r.z.path);
  GridFields f;
  f.nx = z.ncols;
  f.ny = z.nrows;
  f.dx = f.dy = z.cellsize;
  f.active = z.active_mask();
  f.z = z.values;
  f.n = load_field(r.n, s.base_dir, f.nx, f.ny, &f.active);
  f.k_s = load_field(r.k_s, s.base_dir, f.nx, f.ny, &f.active);
  f.psi_f = load_field(r.psi_f, s.base_dir, f.nx, f.ny, &f.active);
  f.theta_s = load_field(r.theta_s, s.base_dir, f.nx, f.ny, &f.active);
  f.theta_i = load_field(r.theta_i, s.base_dir, f.nx, f.ny, &f.active);
  f.outlets = r.outlets;
  f.outlet_slope = r.outlet_slope;
  return make_grid(f);
}

namespace {

MeasurementMap build_measurement(const Scenario& s, const CellGrid& grid) {
  std::vector<Gauge> gauges;
  for (std::size_t i = 0; i < s.gauges.size(); ++i) {
    const GaugeSpec& g = s.gauges[i];
    const int cell = grid.cell_at(g.row, g.col);
    if (cell < 0)
      throw ConfigError("gauges[" + std::to_string(i) + "]: (" + std::to_string(g.row) + ", " + std::to_string(g.col) +
                        ") is not an active cell");
    gauges.push_back({cell, g.kind});
  }
  return build_measurement_matrix(gauges, grid);
}

SystemOptions system_options(const Scenario& s) {
  SystemOptions o;
  o.infiltration = s.infiltration;
  return o;
}

}  // namespace

Model::Model(const Scenario& s)
    : grid(build_scenario_grid(s)),
      routing(build_routing_operators(grid)),
      system(grid, routing, s.regularization, system_options(s)),
      params(ModelParameters::from_grid(grid)),
      measurement(build_measurement(s, grid)) {}

namespace {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ull;
  void add(const char* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(data[i]);
      h *= 0x100000001b3ull;
    }
  }
  void add(const std::string& s) { add(s.data(), s.size()); }
};

}  // namespace

std::string scenario_hash(const Scenario& s) {
  Fnv1a f;
  f.add(scenario_to_json(s).dump());
  if (s.grid_type == GridType::raster) {
    for (const FieldSource* fs : {&s.raster.z, &s.raster.n, &s.raster.k_s, &s.raster.psi_f, &s.raster.theta_s,
                                  &s.raster.theta_i}) {
      if (!fs->is_file()) continue;
      std::ifstream in(s.base_dir / fs->path, std::ios::binary);
      const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      f.add(content);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f.h));
  return buf;
}

namespace {
constexpr char kTrajMagic[8] = {'H', 'D', 'T', 'R', 'A', 'J', 0, 1};
}

void save_trajectory(const std::filesystem::path& path, const std::vector<Eigen::VectorXd>& states) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const std::int64_t n = states.empty() ? 0 : states.front().size();
  const std::int64_t count = static_cast<std::int64_t>(states.size());
  out.write(kTrajMagic, 8);
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&count), 8);
  for (const auto& x : states) out.write(reinterpret_cast<const char*>(x.data()), static_cast<std::streamsize>(8 * n));
  if (!out) throw IoError("write failed for " + path.string());
}

std::optional<std::vector<Eigen::VectorXd>> load_trajectory(const std::filesystem::path& path, int n_x, int count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::int64_t n = 0, c = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&c), 8);
  if (!in || std::memcmp(magic, kTrajMagic, 8) != 0 || n != n_x || c != count) return std::nullopt;
  std::vector<Eigen::VectorXd> states(count, Eigen::VectorXd(n_x));
  for (auto& x : states) in.read(reinterpret_cast<char*>(x.data()), static_cast<std::streamsize>(8 * n_x));
  if (!in) return std::nullopt;
  return states;
}

}  // namespace hydrodae
