#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "hydrodae/dae.hpp"
#include "hydrodae/grid.hpp"

namespace testing {

/// nx x ny grid with a generic tilted, slightly rough surface so no two
/// water-surface slopes tie.
inline hydrodae::GridFields plane_fields(int nx, int ny, double cell = 10.0, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  hydrodae::GridFields f;
  f.nx = nx;
  f.ny = ny;
  f.dx = cell;
  f.dy = cell * 1.25;
  const std::size_t N = static_cast<std::size_t>(nx) * ny;
  f.z.resize(N);
  for (int r = 0; r < ny; ++r)
    for (int c = 0; c < nx; ++c) f.z[r * nx + c] = 0.03 * c * f.dx + 0.02 * (ny - 1 - r) * f.dy + jitter(rng);
  f.n.assign(N, 0.05);
  f.k_s.assign(N, 4.1667e-6);
  f.psi_f.assign(N, 0.05);
  f.theta_s.assign(N, 0.35);
  f.theta_i.assign(N, 0.15);
  f.outlets = {{ny - 1, 0}};
  f.outlet_slope = 0.02;
  return f;
}

/// Closed, impermeable single cell.
inline hydrodae::GridFields single_cell() {
  hydrodae::GridFields f;
  f.nx = f.ny = 1;
  f.dx = f.dy = 10.0;
  f.z = {0.0};
  f.n = {0.03};
  f.k_s = {1e-6};
  f.psi_f = {0.0};
  f.theta_s = {0.3};
  f.theta_i = {0.3};
  return f;
}

/// Random admissible state away from regularization kinks: h > h_flow,
/// F > F_min, Q = phi(h).
inline Eigen::VectorXd vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Eigen::VectorXd random_state(const hydrodae::DescriptorSystem& sys, const std::vector<double>& n,
                                    std::mt19937_64& rng, double h_lo = 2e-3, double h_hi = 5e-2) {
  const int K = sys.cells();
  std::uniform_real_distribution<double> uh(h_lo, h_hi), uf(1e-3, 2e-2);
  Eigen::VectorXd h(K), F(K);
  for (int c = 0; c < K; ++c) {
    h[c] = uh(rng);
    F[c] = uf(rng);
  }
  return sys.consistent_state(h, F, vec(n));
}

}  // namespace testing
