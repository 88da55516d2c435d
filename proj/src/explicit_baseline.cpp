#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "hydrodae/dae.hpp"
#include "hydrodae/errors.hpp"

namespace hydrodae {

namespace detail {
void record_state(SimulationResult& res, const DescriptorSystem& sys, const SolverSettings& s,
                  const SimulationOptions& opt, int k, const Eigen::VectorXd& x);
Eigen::VectorXd initial_state(const DescriptorSystem& sys, const ModelParameters& params,
                              const SimulationOptions& opt);
}  // namespace detail

SimulationResult explicit_baseline_simulate(const DescriptorSystem& system, const Hyetograph& rain,
                                            const ModelParameters& params, const SolverSettings& settings,
                                            const SimulationOptions& options, const ExplicitSettings& ex) {
  const auto t0 = std::chrono::steady_clock::now();
  settings.validate();
  rain.validate();
  if (!(ex.cfl > 0)) throw ConfigError("explicit CFL number must be > 0");

  const CellGrid& grid = system.grid();
  const RoutingOperators& routing = system.routing();
  const RegularizationConstants& reg = system.regularization();
  const bool soil = system.options().infiltration;
  const int K = system.cells();
  const int N = settings.horizon_steps;
  const double dt = settings.dt;
  const double area = grid.cell_area();
  const double ds_min = std::min(grid.dx, grid.dy);
  const bool par = settings.exec == Exec::parallel;

  SimulationResult res;
  Eigen::VectorXd x = detail::initial_state(system, params, options);
  detail::record_state(res, system, settings, options, 0, x);
  res.rain_m3.push_back(0.0);
  res.infil_m3.push_back(0.0);
  res.outflow_m3.push_back(0.0);
  res.ledger.storage_initial = res.storage_m3.front();

  Eigen::VectorXd h = x.head(K), F = x.segment(K, K);
  Eigen::VectorXd h_new(K), f(K), speed(K), out_free(K), proj(K);
  Eigen::MatrixXd Q(K, 4);
  long total_substeps = 0;

  for (int k = 1; k <= N; ++k) {
    const ThetaVector theta = step_theta(params, rain, dt, k);
    double remaining = dt;
    int substeps = 0;
    while (remaining > 0.0) {
#pragma omp parallel for schedule(static) if (par)
      for (int c = 0; c < K; ++c) {
        const DirectionalFlux fl = manning_map(make_stencil(c, h.data(), params.n.data(), grid, routing), reg);
        for (int d = 0; d < 4; ++d) Q(c, d) = fl.Q[d];
        speed[c] = fl.ff > 0.0 ? fl.v : 0.0;
      }
      const double vmax = speed.maxCoeff();
      double dt_sub = remaining;
      if (vmax > 0.0) {
        const double limit = ex.cfl * ds_min / vmax;
        dt_sub = remaining / std::ceil(remaining / limit);
      }
      if (++total_substeps > ex.max_substeps)
        throw NumericalError("explicit baseline exceeded " + std::to_string(ex.max_substeps) + " substeps at step " +
                             std::to_string(k));

      // Infiltration from the current depth, then scale outflows so no cell
      // sends more water than it holds. Scaling the sender's Q also scales
      // what its neighbours receive, so mass is conserved.
#pragma omp parallel for schedule(static) if (par)
      for (int c = 0; c < K; ++c) {
        const double R = theta.rain(c);
        f[c] = soil ? infiltration_rate(h[c], R, F[c], h[c], {theta.k_s(c), theta.psi_f(c), theta.eta(c)}, dt_sub, reg)
                    : 0.0;
        const double avail = h[c] + dt_sub * (R - f[c]);
        const double out = dt_sub * Q.row(c).sum() / area;
        if (out > avail) {
          const double alpha = avail > 0.0 ? avail / out : 0.0;
          Q.row(c) *= alpha;
        }
      }
#pragma omp parallel for schedule(static) if (par)
      for (int c = 0; c < K; ++c) {
        double q_in = 0.0, q_out = 0.0, q_free = 0.0;
        for (int d = 0; d < 4; ++d) {
          q_out += Q(c, d);
          if (routing.face[d][c] == FaceKind::free_drainage) q_free += Q(c, d);
          const int nb = routing.neighbor[d][c];
          if (nb >= 0) q_in += Q(nb, index_of(opposite(static_cast<Direction>(d))));
        }
        double hn = h[c] + dt_sub * (theta.rain(c) - f[c] + (q_in - q_out) / area);
        proj[c] = 0.0;
        if (hn < 0.0) {
          proj[c] = -hn * area;
          hn = 0.0;
        }
        h_new[c] = hn;
        out_free[c] = q_free;
      }
      for (int c = 0; c < K; ++c) {
        F[c] += dt_sub * f[c];
        if (!(std::abs(h_new[c]) <= ex.blowup_depth))
          throw NumericalError("explicit baseline unstable: depth " + std::to_string(h_new[c]) + " m at cell " +
                               std::to_string(c) + ", step " + std::to_string(k));
      }
      res.ledger.rain += dt_sub * area * theta.block(ThetaKind::rain).sum();
      res.ledger.infiltration += dt_sub * area * f.sum();
      res.ledger.outflow += dt_sub * out_free.sum();
      res.ledger.projection += proj.sum();
      h.swap(h_new);
      remaining -= dt_sub;
      if (remaining < 1e-12 * dt) remaining = 0.0;
      ++substeps;
    }
    res.newton_iterations.push_back(substeps);
    res.rain_m3.push_back(res.ledger.rain);
    res.infil_m3.push_back(res.ledger.infiltration);
    res.outflow_m3.push_back(res.ledger.outflow);
    x.head(K) = h;
    x.segment(K, K) = F;
    system.apply_discharges(x, params.n, settings.exec);
    detail::record_state(res, system, settings, options, k, x);
  }
  res.ledger.storage_final = res.storage_m3.back();
  res.final_state = x;
  res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace hydrodae
