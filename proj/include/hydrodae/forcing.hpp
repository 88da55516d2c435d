#pragma once

#include <vector>

#include <Eigen/Core>

#include "hydrodae/grid.hpp"
#include "hydrodae/state.hpp"

namespace hydrodae {

/// Stepwise-constant, right-continuous rainfall: intensity[i] (mm/h) holds
/// on [time[i], time[i+1]); the last value extends indefinitely.
struct Hyetograph {
  std::vector<double> time_s;
  std::vector<double> intensity_mm_h;

  /// Throws ConfigError unless times start at 0, increase strictly and
  /// intensities are >= 0.
  void validate() const;
  /// Rate at time t in m/s.
  double rate(double t) const;
  /// Rain depth (m) over [t0, t1].
  double depth(double t0, double t1) const;
  /// Average rate (m/s) over [t0, t1].
  double average_rate(double t0, double t1) const { return depth(t0, t1) / (t1 - t0); }

  static Hyetograph constant(double mm_h) { return {{0.0}, {mm_h}}; }
};

inline constexpr double kMmPerHourToMs = 1.0 / 3.6e6;

/// Per-cell parameter fields for one realization; rain_scale multiplies the
/// hyetograph cell by cell.
struct ModelParameters {
  Eigen::VectorXd n;
  Eigen::VectorXd k_s;
  Eigen::VectorXd psi_f;
  Eigen::VectorXd eta;
  Eigen::VectorXd rain_scale;

  static ModelParameters from_grid(const CellGrid& grid);
  int cells() const noexcept { return static_cast<int>(n.size()); }
  ThetaVector theta(double rain_rate) const;
};

}  // namespace hydrodae
