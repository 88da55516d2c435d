#pragma once

#include <array>

#include "hydrodae/grid.hpp"

namespace hydrodae {

struct RegularizationConstants {
  double h_smooth = 1e-6;  // m
  double h_0 = 0.0;        // ponding threshold, m
  double h_flow = 1e-4;    // flow activation depth, m
  double v_max = 10.0;     // m/s
  double F_min = 1e-6;     // m
  double eps_s = 1e-12;    // (m/s)^2

  void validate() const;
};

/// K_s (1 + eta (psi_f + h) / max(F, F_min)).
double green_ampt_capacity(double h, double F, double k_s, double psi_f, double eta,
                           double F_min) noexcept;

struct SmoothMin {
  double value;
  double d_a;
  double d_b;
};

/// 0.5 (a + b - sqrt((a - b)^2 + eps)) and its partial derivatives.
SmoothMin smooth_min(double a, double b, double eps) noexcept;

struct SoilParams {
  double k_s = 0.0;
  double psi_f = 0.0;
  double eta = 0.0;
};

/// Infiltration rate and its partial derivatives. `d_supply` is with
/// respect to i_a = h_prev / dt + R, so d/dR = d_supply and
/// d/dh_prev = d_supply / dt.
struct InfiltrationEval {
  double rate = 0.0;
  double capacity = 0.0;
  double supply = 0.0;
  double d_h = 0.0;
  double d_F = 0.0;
  double d_supply = 0.0;
  double d_k_s = 0.0;
  double d_psi_f = 0.0;
  double d_eta = 0.0;
};

/// Smooth minimum of capacity (current h, F) and supply (previous depth
/// plus rain). Without supply the rate is exactly zero.
InfiltrationEval evaluate_infiltration(double h_prev, double rain_next, double F, double h,
                                       const SoilParams& soil, double dt,
                                       const RegularizationConstants& reg) noexcept;

double infiltration_rate(double h_prev, double rain_next, double F, double h,
                         const SoilParams& soil, double dt,
                         const RegularizationConstants& reg) noexcept;

/// Local view of one cell and its four faces for the Manning map.
struct CellStencil {
  double h = 0.0;
  double z = 0.0;
  double n = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double outlet_slope = 0.0;
  std::array<FaceKind, 4> face{};
  std::array<double, 4> h_nb{};
  std::array<double, 4> z_nb{};
};

struct DirectionalFlux {
  std::array<double, 4> S{};
  std::array<double, 4> w{};
  std::array<double, 4> Q{};
  double S_max = 0.0;
  double S_tot = 0.0;
  double v = 0.0;
  double h_eff = 0.0;
  double ff = 0.0;
};

/// d_h[d][0] is dQ_d/dh of the cell itself, d_h[d][1 + e] is dQ_d/dh of
/// the neighbour in direction e (zero when that face is not a neighbour).
struct DischargeGradient {
  std::array<std::array<double, 5>, 4> d_h{};
  std::array<double, 4> d_n{};
};

DirectionalFlux manning_map(const CellStencil& s, const RegularizationConstants& reg,
                            DischargeGradient* grad = nullptr) noexcept;

CellStencil make_stencil(int cell, const double* h, const double* n, const CellGrid& grid,
                         const RoutingOperators& routing) noexcept;

/// Manning map for cell c with roughness from the grid.
DirectionalFlux directional_discharge(int cell, const double* h, const CellGrid& grid,
                                      const RoutingOperators& routing,
                                      const RegularizationConstants& reg);

}  // namespace hydrodae
