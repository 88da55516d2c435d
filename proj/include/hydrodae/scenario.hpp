#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hydrodae/dae.hpp"
#include "hydrodae/ensemble.hpp"
#include "hydrodae/measurement.hpp"
#include "hydrodae/uncertainty.hpp"

namespace hydrodae {

enum class GridType { vtilted, raster };

struct GaugeSpec {
  int row = 0;
  int col = 0;
  StateKind kind = StateKind::h;
};

/// A raster file path, or a constant applied to every cell.
struct FieldSource {
  std::string path;
  double value = 0.0;

  bool is_file() const noexcept { return !path.empty(); }
};

/// Raster inputs; paths are relative to the scenario file. K_s is in m/s.
struct RasterSource {
  FieldSource z, n, k_s, psi_f, theta_s, theta_i;
  std::vector<std::pair<int, int>> outlets;  // (row, col)
  double outlet_slope = 0.02;
};

struct Scenario {
  GridType grid_type = GridType::vtilted;
  VTiltedParams vtilted;
  RasterSource raster;
  Hyetograph rain;
  std::vector<GaugeSpec> gauges;
  UncertaintySpec uncertainty;
  SolverSettings solver;
  double horizon_s = 5400.0;
  bool infiltration = true;
  Engine engine = Engine::dae;
  ExplicitSettings explicit_settings;
  RegularizationConstants regularization;
  int covariance_max_cells = 2500;
  int covariance_window = 1;
  std::vector<int> covariance_dump_steps;
  int ensemble_samples = 100;
  SpatialMode ensemble_mode = SpatialMode::correlated;
  Engine ensemble_engine = Engine::dae;
  int snapshot_step = -1;  // -1: nominal hydrograph peak
  std::string output_dir = "out";
  std::uint64_t seed = 42;

  /// Directory that relative raster paths resolve against (not serialized).
  std::filesystem::path base_dir;

  int horizon_steps() const;
  /// Solver settings with the horizon filled in.
  SolverSettings solver_settings() const;
  EnsembleSpec ensemble_spec() const;
};

/// Synthetic single-peak storm: 10-minute blocks of 20, 45, 70, 45, 20 mm/h,
/// then dry until 1.5 h.
Hyetograph default_hyetograph();

/// Lattice of gauges every `spacing` metres in both directions, each on the
/// component that points downslope (toward the channel, or along it).
std::vector<GaugeSpec> vtilted_gauges(const VTiltedParams& params, double spacing = 100.0);

/// Full-size benchmark (81 x 50 cells at 20 m).
Scenario default_vtilted_scenario();
/// 11 x 10 tile (100 m hillslopes, 20 m channel, 200 m long) for covariance
/// and ensemble work.
Scenario toy_vtilted_scenario();

/// Throws ConfigError naming the offending field path.
Scenario parse_scenario(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const Scenario& s);

/// Grid, operators, parameters and measurement map built from a scenario.
/// Not movable: the descriptor system refers to the grid and operators.
class Model {
 public:
  explicit Model(const Scenario& scenario);
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  CellGrid grid;
  RoutingOperators routing;
  DescriptorSystem system;
  ModelParameters params;
  MeasurementMap measurement;
};

CellGrid build_scenario_grid(const Scenario& scenario);

/// FNV-1a over the canonical scenario JSON and any raster file contents.
std::string scenario_hash(const Scenario& scenario);

/// Binary trajectory cache: magic, n_x, count, then states.
void save_trajectory(const std::filesystem::path& path, const std::vector<Eigen::VectorXd>& states);
std::optional<std::vector<Eigen::VectorXd>> load_trajectory(const std::filesystem::path& path, int n_x, int count);

}  // namespace hydrodae
