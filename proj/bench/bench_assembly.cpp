// Residual/Jacobian assembly and explicit-step timing, serial against
// OpenMP, on the full V-tilted grid.

#include <chrono>
#include <cstdio>
#include <random>

#include <omp.h>

#include "hydrodae/dae.hpp"
#include "hydrodae/scenario.hpp"

using namespace hydrodae;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 20;
  const Scenario s = default_vtilted_scenario();
  const Model m(s);
  const int K = m.grid.num_cells();

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uh(1e-3, 5e-2), uf(1e-3, 2e-2);
  Eigen::VectorXd h(K), F(K);
  for (int c = 0; c < K; ++c) {
    h[c] = uh(rng);
    F[c] = uf(rng);
  }
  const Eigen::VectorXd x = m.system.consistent_state(h, F, m.params.n);
  const Eigen::VectorXd xp = x * 0.9;
  const ThetaVector th = m.params.theta(2e-5);

  Eigen::VectorXd r;
  SparseRowMatrix J = m.system.pattern();
  const double t_ser = best_of(reps, [&] { m.system.evaluate(x, xp, th, 1.0, &r, &J, Exec::serial); });
  const double t_par = best_of(reps, [&] { m.system.evaluate(x, xp, th, 1.0, &r, &J, Exec::parallel); });

  Eigen::VectorXd y = x;
  const double q_ser = best_of(reps, [&] { m.system.apply_discharges(y, m.params.n, Exec::serial); });
  const double q_par = best_of(reps, [&] { m.system.apply_discharges(y, m.params.n, Exec::parallel); });

  std::printf("grid %d x %d (%d cells, n_x = %d), %d OpenMP threads, best of %d\n", m.grid.nx, m.grid.ny, K,
              m.system.state_size(), omp_get_max_threads(), reps);
  std::printf("%-22s %12s %12s %8s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");
  std::printf("%-22s %12.3f %12.3f %8.2f\n", "residual+jacobian", 1e3 * t_ser, 1e3 * t_par, t_ser / t_par);
  std::printf("%-22s %12.3f %12.3f %8.2f\n", "discharge map", 1e3 * q_ser, 1e3 * q_par, q_ser / q_par);
  return 0;
}
