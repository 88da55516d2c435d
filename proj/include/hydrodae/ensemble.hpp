#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hydrodae/dae.hpp"
#include "hydrodae/uncertainty.hpp"

namespace hydrodae {

enum class SpatialMode {
  /// One draw per quantity, applied to every cell.
  correlated,
  /// Independent draws per cell.
  iid,
};

enum class Engine { dae, explicit_euler };

std::string_view to_string(SpatialMode m) noexcept;
SpatialMode parse_spatial_mode(std::string_view name);
std::string_view to_string(Engine e) noexcept;
Engine parse_engine(std::string_view name);

struct EnsembleSpec {
  int n_samples = 100;
  std::uint64_t seed = 42;
  UncertaintySpec uncertainty;
  SpatialMode mode = SpatialMode::correlated;

  void validate() const;
};

/// n_samples x dims matrix of stratified uniforms: each column has exactly
/// one value in each interval [i/n, (i+1)/n).
Eigen::MatrixXd lhs_unit(int n_samples, int dims, std::uint64_t seed);

/// Inverse CDF of the family with the given mean and CV at probability u.
/// Log-normal is moment-matched; the truncated Gaussian lives on [0, 1].
double sample_quantile(Family family, double mean, double cv, double u);

/// Parameter realizations around `nominal`; rain is a multiplier on the
/// hyetograph (mean 1).
std::vector<ModelParameters> lhs_sample(const EnsembleSpec& spec, const ModelParameters& nominal);

struct EnsembleOptions {
  Engine engine = Engine::dae;
  /// Steps at which per-cell depth statistics are collected.
  std::vector<int> snapshot_steps;
  double max_failure_fraction = 0.10;
  ExplicitSettings explicit_settings;
};

/// Two-pass sample statistics over the successful realizations, combined in
/// sample-index order.
struct EnsembleStats {
  int n_samples = 0;
  std::vector<int> failed;
  Eigen::MatrixXd outlet_q;  // (N+1) x n_samples; failed columns are NaN
  Eigen::VectorXd q_mean, q_var, q_min, q_max;
  std::vector<int> snapshot_steps;
  std::vector<Eigen::VectorXd> h_mean;
  std::vector<Eigen::VectorXd> h_var;
};

EnsembleStats run_ensemble(const DescriptorSystem& system, const Hyetograph& rain,
                           const std::vector<ModelParameters>& realizations, const SolverSettings& settings,
                           const EnsembleOptions& options = {});

struct LogLogFit {
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
  int n_pairs = 0;
};

/// OLS of log10(sigma_pse) on log10(sigma_mc) over pairs with both values
/// above `floor`. Throws FitError with fewer than 3 pairs.
LogLogFit loglog_fit(const Eigen::VectorXd& sigma_pse, const Eigen::VectorXd& sigma_mc, double floor = 1e-12);

}  // namespace hydrodae
