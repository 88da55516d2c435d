#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

#include "hydrodae/grid.hpp"

namespace hydrodae {

/// Blocks of the state vector, in storage order.
enum class StateKind : int { h = 0, F = 1, Q_left = 2, Q_right = 3, Q_up = 4, Q_down = 5 };

inline constexpr std::array<StateKind, 6> kStateKinds = {StateKind::h,       StateKind::F,
                                                         StateKind::Q_left,  StateKind::Q_right,
                                                         StateKind::Q_up,    StateKind::Q_down};

constexpr StateKind discharge_kind(Direction d) noexcept {
  return static_cast<StateKind>(2 + index_of(d));
}
constexpr bool is_differential(StateKind k) noexcept {
  return k == StateKind::h || k == StateKind::F;
}

std::string_view to_string(StateKind k) noexcept;
/// Accepts h, F, Q_L, Q_R, Q_U, Q_D (and the long forms). Throws ConfigError.
StateKind parse_state_kind(std::string_view name);

/// Flat layout [h | F | Q_L | Q_R | Q_U | Q_D], each block K long.
struct StateLayout {
  int cells = 0;

  int size() const noexcept { return 6 * cells; }
  int differential_size() const noexcept { return 2 * cells; }
  int index(StateKind kind, int cell) const noexcept {
    return static_cast<int>(kind) * cells + cell;
  }
  StateKind kind_of(int index) const noexcept { return static_cast<StateKind>(index / cells); }
  int cell_of(int index) const noexcept { return index % cells; }
};

/// Uncertain inputs/parameters [R | n | K_s | psi_f | eta], each block K long.
enum class ThetaKind : int { rain = 0, roughness = 1, k_s = 2, psi_f = 3, eta = 4 };

struct ThetaLayout {
  int cells = 0;
  int size() const noexcept { return 5 * cells; }
  int index(ThetaKind kind, int cell) const noexcept {
    return static_cast<int>(kind) * cells + cell;
  }
};

/// theta at one time step. Plain vector plus block accessors.
struct ThetaVector {
  Eigen::VectorXd values;
  int cells = 0;

  auto block(ThetaKind kind) { return values.segment(static_cast<int>(kind) * cells, cells); }
  auto block(ThetaKind kind) const {
    return values.segment(static_cast<int>(kind) * cells, cells);
  }
  double rain(int c) const { return values[c]; }
  double roughness(int c) const { return values[cells + c]; }
  double k_s(int c) const { return values[2 * cells + c]; }
  double psi_f(int c) const { return values[3 * cells + c]; }
  double eta(int c) const { return values[4 * cells + c]; }

  /// Nominal parameters from the grid with a spatially uniform rain rate (m/s).
  static ThetaVector nominal(const CellGrid& grid, double rain_rate);
};

}  // namespace hydrodae
