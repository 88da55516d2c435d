#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

namespace hydrodae {

/// Cardinal directions of the von Neumann neighbourhood. Rows grow
/// downward (south), columns grow to the right (east).
enum class Direction : int { left = 0, right = 1, up = 2, down = 3 };

inline constexpr std::array<Direction, 4> kDirections = {Direction::left, Direction::right,
                                                         Direction::up, Direction::down};

constexpr int index_of(Direction d) noexcept { return static_cast<int>(d); }

constexpr Direction opposite(Direction d) noexcept {
  switch (d) {
    case Direction::left: return Direction::right;
    case Direction::right: return Direction::left;
    case Direction::up: return Direction::down;
    case Direction::down: return Direction::up;
  }
  return d;
}

constexpr int row_offset(Direction d) noexcept {
  return d == Direction::up ? -1 : (d == Direction::down ? 1 : 0);
}
constexpr int col_offset(Direction d) noexcept {
  return d == Direction::left ? -1 : (d == Direction::right ? 1 : 0);
}

/// Left/right faces are horizontal neighbours.
constexpr bool is_horizontal(Direction d) noexcept {
  return d == Direction::left || d == Direction::right;
}

std::string_view to_string(Direction d) noexcept;

/// Raster-sized inputs for building a CellGrid. All per-cell vectors are
/// row-major with nx*ny entries; `active` marks cells that belong to the
/// domain (NODATA cells are inactive).
struct GridFields {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  std::vector<double> z;
  std::vector<double> n;
  std::vector<double> k_s;
  std::vector<double> psi_f;
  std::vector<double> theta_s;
  std::vector<double> theta_i;
  std::vector<std::uint8_t> active;
  /// (row, col) of outlet cells.
  std::vector<std::pair<int, int>> outlets;
  double outlet_slope = 0.0;
};

/// Raster cell graph. Only active cells are enumerated; cell indices
/// follow row-major order over the active cells.
struct CellGrid {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;

  std::vector<int> raster_of_cell;
  std::vector<int> cell_of_raster;  // -1 for inactive raster positions

  std::vector<double> z;
  std::vector<double> n;
  std::vector<double> k_s;
  std::vector<double> psi_f;
  std::vector<double> theta_s;
  std::vector<double> theta_i;
  /// theta_s - theta_i, computed once at construction.
  std::vector<double> moisture_deficit;

  std::vector<int> outlet_cells;
  std::vector<std::uint8_t> outlet_flag;
  double outlet_slope = 0.0;

  int num_cells() const noexcept { return static_cast<int>(z.size()); }
  double cell_area() const noexcept { return dx * dy; }
  int row(int cell) const noexcept { return raster_of_cell[cell] / nx; }
  int col(int cell) const noexcept { return raster_of_cell[cell] % nx; }
  /// Active cell index at (row, col), or -1.
  int cell_at(int row, int col) const noexcept;
  bool is_outlet(int cell) const noexcept { return outlet_flag[cell] != 0; }

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

CellGrid make_grid(const GridFields& fields);

struct VTiltedParams {
  double cell_size = 20.0;
  double hillslope_width = 800.0;
  double channel_width = 20.0;
  double length = 1000.0;
  double hillslope_n = 0.015;
  double channel_n = 0.15;
  double slope_x = 0.05;
  double slope_y = 0.02;
  double outlet_slope = 0.02;
  double k_s = 15.0 / 1000.0 / 3600.0;  // 15 mm/h in m/s
  double psi_f = 0.0;
  double theta_i = 0.15;
  double theta_s = 0.30;
};

/// Two tilted hillslopes draining to a central channel; the channel drains
/// toward the last row, whose channel cells are the outlet.
GridFields vtilted_fields(const VTiltedParams& params);
CellGrid build_vtilted(const VTiltedParams& params);

enum class FaceKind : std::uint8_t { closed = 0, neighbor = 1, free_drainage = 2 };

/// Directional adjacency of the active cells.
///
/// B[d](c, c') = 1 iff c' is the neighbour of c in direction d. The inflow
/// into c is sum_d B[d] * Q_{opposite(d)}: the left neighbour's rightward
/// discharge enters c.
struct RoutingOperators {
  std::array<std::vector<int>, 4> neighbor;
  std::array<std::vector<FaceKind>, 4> face;
  std::array<Eigen::SparseMatrix<double>, 4> B;

  int neighbor_of(int cell, Direction d) const noexcept { return neighbor[index_of(d)][cell]; }
  FaceKind face_of(int cell, Direction d) const noexcept { return face[index_of(d)][cell]; }
  const Eigen::SparseMatrix<double>& matrix(Direction d) const noexcept { return B[index_of(d)]; }
};

RoutingOperators build_routing_operators(const CellGrid& grid);

}  // namespace hydrodae
