#include "hydrodae/physics.hpp"

#include <algorithm>
#include <cmath>

#include "hydrodae/errors.hpp"

namespace hydrodae {

void RegularizationConstants::validate() const {
  if (!(h_smooth > 0 && h_flow > 0 && v_max > 0 && F_min > 0 && eps_s > 0))
    throw ConfigError("regularization constants must be strictly positive (h_0 may be zero)");
  if (!(h_0 >= 0)) throw ConfigError("h_0 must be >= 0");
}

double green_ampt_capacity(double h, double F, double k_s, double psi_f, double eta,
                           double F_min) noexcept {
  return k_s * (1.0 + eta * (psi_f + h) / std::max(F, F_min));
}

SmoothMin smooth_min(double a, double b, double eps) noexcept {
  const double d = a - b;
  const double s = std::sqrt(d * d + eps);
  return {0.5 * (a + b - s), 0.5 * (1.0 - d / s), 0.5 * (1.0 + d / s)};
}

InfiltrationEval evaluate_infiltration(double h_prev, double rain_next, double F, double h,
                                       const SoilParams& soil, double dt,
                                       const RegularizationConstants& reg) noexcept {
  InfiltrationEval e;
  const double Fe = std::max(F, reg.F_min);
  const double dFe = F > reg.F_min ? 1.0 : 0.0;
  const double head = soil.psi_f + h;
  e.capacity = soil.k_s * (1.0 + soil.eta * head / Fe);
  e.supply = h_prev / dt + rain_next;
  if (!(e.supply > 0.0)) return e;

  const SmoothMin m = smooth_min(e.capacity, e.supply, reg.eps_s);
  e.rate = m.value;
  e.d_supply = m.d_b;
  e.d_h = m.d_a * soil.k_s * soil.eta / Fe;
  e.d_F = -m.d_a * soil.k_s * soil.eta * head / (Fe * Fe) * dFe;
  e.d_k_s = m.d_a * (1.0 + soil.eta * head / Fe);
  e.d_psi_f = m.d_a * soil.k_s * soil.eta / Fe;
  e.d_eta = m.d_a * soil.k_s * head / Fe;
  return e;
}

double infiltration_rate(double h_prev, double rain_next, double F, double h,
                         const SoilParams& soil, double dt,
                         const RegularizationConstants& reg) noexcept {
  return evaluate_infiltration(h_prev, rain_next, F, h, soil, dt, reg).rate;
}

DirectionalFlux manning_map(const CellStencil& s, const RegularizationConstants& reg,
                            DischargeGradient* grad) noexcept {
  DirectionalFlux out;
  if (grad) *grad = DischargeGradient{};

  std::array<double, 4> ds{};   // distance to neighbour
  std::array<double, 4> len{};  // interface width
  std::array<bool, 4> live{};   // slope depends on h
  const double zeta = s.z + s.h;
  for (int d = 0; d < 4; ++d) {
    const bool horiz = is_horizontal(static_cast<Direction>(d));
    ds[d] = horiz ? s.dx : s.dy;
    len[d] = horiz ? s.dy : s.dx;
    switch (s.face[d]) {
      case FaceKind::closed: out.S[d] = 0.0; break;
      case FaceKind::free_drainage: out.S[d] = s.outlet_slope; break;
      case FaceKind::neighbor: {
        const double slope = (zeta - (s.z_nb[d] + s.h_nb[d])) / ds[d];
        live[d] = slope > 0.0;
        out.S[d] = live[d] ? slope : 0.0;
        break;
      }
    }
    out.S_tot += out.S[d];
  }
  if (!(out.S_tot > 0.0)) return out;

  int m = 0;
  for (int d = 1; d < 4; ++d)
    if (out.S[d] > out.S[m]) m = d;
  out.S_max = out.S[m];

  const double h_reg = std::sqrt(s.h * s.h + reg.h_smooth * reg.h_smooth);
  const double t = h_reg - reg.h_0;
  out.h_eff = t > reg.h_smooth ? t : reg.h_smooth;
  const double dheff = t > reg.h_smooth ? s.h / h_reg : 0.0;

  const double xi = std::clamp(s.h / reg.h_flow, 0.0, 1.0);
  out.ff = xi * xi * (3.0 - 2.0 * xi);
  const double dff = (xi > 0.0 && xi < 1.0) ? 6.0 * xi * (1.0 - xi) / reg.h_flow : 0.0;

  const double v_raw = std::pow(out.h_eff, 2.0 / 3.0) * std::sqrt(out.S_max) / s.n;
  const bool capped = v_raw > reg.v_max;
  out.v = capped ? reg.v_max : v_raw;

  const double G = out.ff * out.v * out.h_eff;
  for (int d = 0; d < 4; ++d) {
    out.w[d] = out.S[d] / out.S_tot;
    out.Q[d] = G * len[d] * out.w[d];
  }
  if (!grad) return out;

  const double dv_h = capped ? 0.0 : out.v * (2.0 / 3.0) * dheff / out.h_eff;
  const double dv_S = capped ? 0.0 : out.v / (2.0 * out.S_max);
  const double dv_n = capped ? 0.0 : -out.v / s.n;
  const double dG_h = dff * out.v * out.h_eff + out.ff * dv_h * out.h_eff + out.ff * out.v * dheff;
  const double dG_S = out.ff * out.h_eff * dv_S;

  // dS_e/dh_j: j = 0 is the cell itself, j = 1 + e the neighbour across face e.
  auto dS = [&](int e, int j) {
    if (!live[e]) return 0.0;
    if (j == 0) return 1.0 / ds[e];
    return j == 1 + e ? -1.0 / ds[e] : 0.0;
  };
  for (int j = 0; j < 5; ++j) {
    if (j > 0 && s.face[j - 1] != FaceKind::neighbor) continue;
    double dStot = 0.0;
    for (int e = 0; e < 4; ++e) dStot += dS(e, j);
    const double dG = (j == 0 ? dG_h : 0.0) + dG_S * dS(m, j);
    for (int d = 0; d < 4; ++d) {
      const double dw = (dS(d, j) * out.S_tot - out.S[d] * dStot) / (out.S_tot * out.S_tot);
      grad->d_h[d][j] = len[d] * (dG * out.w[d] + G * dw);
    }
  }
  for (int d = 0; d < 4; ++d) grad->d_n[d] = out.ff * out.h_eff * dv_n * len[d] * out.w[d];
  return out;
}

CellStencil make_stencil(int cell, const double* h, const double* n, const CellGrid& grid,
                         const RoutingOperators& routing) noexcept {
  CellStencil s;
  s.h = h[cell];
  s.z = grid.z[cell];
  s.n = n[cell];
  s.dx = grid.dx;
  s.dy = grid.dy;
  s.outlet_slope = grid.outlet_slope;
  for (int d = 0; d < 4; ++d) {
    s.face[d] = routing.face[d][cell];
    const int nb = routing.neighbor[d][cell];
    if (nb >= 0) {
      s.h_nb[d] = h[nb];
      s.z_nb[d] = grid.z[nb];
    }
  }
  return s;
}

DirectionalFlux directional_discharge(int cell, const double* h, const CellGrid& grid,
                                      const RoutingOperators& routing,
                                      const RegularizationConstants& reg) {
  return manning_map(make_stencil(cell, h, grid.n.data(), grid, routing), reg);
}

}  // namespace hydrodae
