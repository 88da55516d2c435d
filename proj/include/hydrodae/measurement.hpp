#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "hydrodae/grid.hpp"
#include "hydrodae/state.hpp"

namespace hydrodae {

struct Gauge {
  int cell = 0;
  StateKind kind = StateKind::h;

  friend bool operator==(const Gauge&, const Gauge&) = default;
};

/// Binary selection of measured states: y = C x + v.
struct MeasurementMap {
  std::vector<Gauge> gauges;
  std::vector<int> state_index;  // flat state index per gauge row
  Eigen::SparseMatrix<double, Eigen::RowMajor> C;

  int rows() const noexcept { return static_cast<int>(gauges.size()); }
};

/// Throws ConfigError for out-of-range cells or duplicate gauges.
MeasurementMap build_measurement_matrix(const std::vector<Gauge>& gauges, const CellGrid& grid);

}  // namespace hydrodae
