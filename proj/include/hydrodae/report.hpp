#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "hydrodae/ascii_grid.hpp"
#include "hydrodae/dae.hpp"
#include "hydrodae/ensemble.hpp"
#include "hydrodae/metrics.hpp"
#include "hydrodae/uncertainty.hpp"

namespace hydrodae {

/// Shortest text that round-trips the double.
std::string format_double(double v);

struct RunSummary {
  std::string name;
  std::string engine;
  double runtime_s = 0.0;
  int steps = 0;
  double dt = 0.0;
  double peak_q = 0.0;
  double t_peak_s = 0.0;
  int max_iterations = 0;  // Newton iterations (dae) or substeps (explicit) per step
  MassLedger ledger;
};

RunSummary summarize_run(const std::string& name, Engine engine, const SimulationResult& result, double dt);

struct Report {
  std::string command;
  std::vector<RunSummary> runs;
  std::optional<HydrographMetrics> metrics;
  std::optional<LogLogFit> fit;
};

inline constexpr int kReportSchema = 1;

nlohmann::json report_to_json(const Report& report);
/// Writes pretty-printed JSON; throws IoError naming the path.
void export_report(const std::filesystem::path& path, const Report& report);

void write_text_file(const std::filesystem::path& path, const std::string& content);

/// t_s, Q_outlet_m3s, storage_m3, infil_m3, rain_m3 (cumulative volumes).
std::string hydrograph_csv(const SimulationResult& result);

/// k, t_s, state_kind, cell, nominal, sigma, lo95, hi95 for every state at
/// every step with stored variances. `states[i]` is the nominal state at
/// `run.steps[i]`.
void write_interval_csv(const std::filesystem::path& path, const CovarianceRun& run,
                        const std::vector<Eigen::VectorXd>& states, double dt, const StateLayout& layout,
                        Family family, double level);

/// Binary dump: 8-byte magic "HDCOV\0\0\1", int64 n, then n*n row-major float64.
void write_covariance_dump(const std::filesystem::path& path, const Eigen::MatrixXd& K);
Eigen::MatrixXd read_covariance_dump(const std::filesystem::path& path);

nlohmann::json fit_to_json(const LogLogFit& fit);

/// Rows are steps, columns samples.
std::string ensemble_csv(const EnsembleStats& stats, double dt);

/// Per-cell values placed on the raster; inactive cells get `nodata`.
AsciiGrid field_to_ascii(const CellGrid& grid, const Eigen::VectorXd& values, double nodata = -9999.0);

}  // namespace hydrodae
