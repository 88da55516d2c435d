#include <cmath>
#include <optional>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "hydrodae/dae.hpp"
#include "hydrodae/errors.hpp"

namespace hydrodae {

void SolverSettings::validate() const {
  if (!(dt > 0)) throw ConfigError("solver.dt must be > 0");
  if (!(newton_tol > 0)) throw ConfigError("solver.newton_tol must be > 0");
  if (max_newton_iters < 1) throw ConfigError("solver.max_newton_iters must be >= 1");
  if (!(damping > 0 && damping <= 1)) throw ConfigError("solver.damping must be in (0, 1]");
  if (max_halvings < 0) throw ConfigError("solver.max_halvings must be >= 0");
  if (horizon_steps < 0) throw ConfigError("solver.horizon_steps must be >= 0");
  if (store_stride < 0) throw ConfigError("solver.store_stride must be >= 0");
}

struct NewtonStepper::Impl {
  using LU = Eigen::SparseLU<SparseColMatrix, Eigen::COLAMDOrdering<int>>;
  LU lu;
  bool analyzed = false;
  Eigen::BiCGSTAB<SparseColMatrix, Eigen::DiagonalPreconditioner<double>> krylov;
  std::vector<Eigen::Triplet<double>> trips;
  SparseColMatrix work;
};

NewtonStepper::NewtonStepper(const DescriptorSystem& system, SolverSettings settings)
    : system_(system), settings_(settings), impl_(new Impl) {
  settings_.validate();
}

NewtonStepper::~NewtonStepper() { delete impl_; }

Eigen::VectorXd NewtonStepper::increment(const SparseRowMatrix& J, const Eigen::VectorXd& r) {
  const StateLayout& L = system_.layout();
  const int K = L.cells;
  Impl& m = *impl_;

  if (settings_.linear_solver == LinearSolverKind::full_lu) {
    m.work = J;
    if (!m.analyzed) {
      m.lu.analyzePattern(m.work);
      m.analyzed = true;
    }
    m.lu.factorize(m.work);
    if (m.lu.info() != Eigen::Success) throw NumericalError("singular Newton matrix: " + m.lu.lastErrorMessage());
    return m.lu.solve(r);
  }

  // Q rows: dQ + J_Qh dh = r_Q.  F rows: J_Fh dh + J_FF dF = r_F.
  // Substituting both into the h rows leaves a K x K system in dh.
  Eigen::VectorXd b(K);
  Eigen::VectorXd jFh(K), jFF(K);
  for (int c = 0; c < K; ++c) {
    const int row = L.index(StateKind::F, c);
    for (SparseRowMatrix::InnerIterator it(J, row); it; ++it) {
      if (it.col() == c) jFh[c] = it.value();
      else jFF[c] = it.value();
    }
  }
  m.trips.clear();
  for (int c = 0; c < K; ++c) {
    double diag = 0.0;
    double rhs = r[c];
    for (SparseRowMatrix::InnerIterator it(J, c); it; ++it) {
      const int col = static_cast<int>(it.col());
      if (col < K) {
        diag += it.value();
      } else if (col < 2 * K) {
        diag -= it.value() * jFh[c] / jFF[c];
        rhs -= it.value() * r[K + c] / jFF[c];
      } else {
        const double a = it.value();
        rhs -= a * r[col];
        for (SparseRowMatrix::InnerIterator q(J, col); q; ++q)
          if (q.col() < K) m.trips.emplace_back(c, static_cast<int>(q.col()), -a * q.value());
      }
    }
    m.trips.emplace_back(c, c, diag);
    b[c] = rhs;
  }
  m.work.resize(K, K);
  m.work.setFromTriplets(m.trips.begin(), m.trips.end());

  Eigen::VectorXd dx(L.size());
  bool solved = false;
  if (settings_.linear_solver == LinearSolverKind::schur) {
    // With moderate dt the depth system is close to the identity and a few
    // Krylov iterations reach working precision.
    m.krylov.setTolerance(1e-14);
    m.krylov.setMaxIterations(200);
    m.krylov.compute(m.work);
    dx.head(K) = m.krylov.solve(b);
    solved = m.krylov.info() == Eigen::Success && dx.head(K).allFinite();
  }
  if (!solved) {
    if (!m.analyzed) {
      m.lu.analyzePattern(m.work);
      m.analyzed = true;
    }
    m.lu.factorize(m.work);
    if (m.lu.info() != Eigen::Success)
      throw NumericalError("singular reduced Newton matrix: " + m.lu.lastErrorMessage());
    dx.head(K) = m.lu.solve(b);
  }
  for (int c = 0; c < K; ++c) dx[K + c] = (r[K + c] - jFh[c] * dx[c]) / jFF[c];
  for (int row = 2 * K; row < L.size(); ++row) {
    double v = r[row];
    for (SparseRowMatrix::InnerIterator q(J, row); q; ++q)
      if (q.col() < K) v -= q.value() * dx[q.col()];
    dx[row] = v;
  }
  return dx;
}

Eigen::VectorXd NewtonStepper::step(const Eigen::VectorXd& x_prev, const ThetaVector& theta, int step_index,
                                    NewtonStats* stats) {
  const double dt = settings_.dt;
  const double tol = settings_.newton_tol;
  NewtonStats local;
  NewtonStats& st = stats ? *stats : local;
  st = NewtonStats{};

  Eigen::VectorXd x = x_prev;
  Eigen::VectorXd r, r_try, x_try;
  SparseRowMatrix J = system_.pattern();
  system_.evaluate(x, x_prev, theta, dt, &r, nullptr, settings_.exec);
  bool converged = false;
  for (int it = 1; it <= settings_.max_newton_iters; ++it) {
    system_.evaluate(x, x_prev, theta, dt, nullptr, &J, settings_.exec);
    Eigen::VectorXd dx;
    try {
      dx = increment(J, r);
    } catch (const NumericalError& e) {
      throw StepFailure(e.what(), step_index, st.trace);
    }
    const double norm = dx.norm();
    st.trace.push_back(norm);
    st.iterations = it;
    if (!std::isfinite(norm)) throw StepFailure("non-finite Newton increment", step_index, st.trace);
    if (norm <= tol) {
      x -= dx;
      converged = true;
      break;
    }
    double lambda = settings_.damping;
    x_try = x - lambda * dx;
    system_.evaluate(x_try, x_prev, theta, dt, &r_try, nullptr, settings_.exec);
    if (norm > 1e3 * tol) {
      const double r0 = r.norm();
      for (int k = 0; k < settings_.max_halvings && !(r_try.norm() <= r0); ++k) {
        lambda *= 0.5;
        ++st.halvings;
        x_try = x - lambda * dx;
        system_.evaluate(x_try, x_prev, theta, dt, &r_try, nullptr, settings_.exec);
      }
    }
    x.swap(x_try);
    r.swap(r_try);
  }
  if (!converged)
    throw StepFailure("Newton did not converge in " + std::to_string(settings_.max_newton_iters) +
                          " iterations at step " + std::to_string(step_index),
                      step_index, st.trace);

  const int K = system_.cells();
  const double limit = -10.0 * system_.regularization().h_smooth;
  const double area = system_.grid().cell_area();
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] >= 0.0) continue;
    if (x[i] < limit)
      throw StepFailure("negative state " + std::to_string(x[i]) + " at index " + std::to_string(i) + " (step " +
                            std::to_string(step_index) + ")",
                        step_index, st.trace);
    if (i < K) st.projected_depth_volume -= x[i] * area;
    x[i] = 0.0;
  }
  return x;
}

Eigen::VectorXd newton_solve_step(const DescriptorSystem& system, const Eigen::VectorXd& x_prev,
                                  const ThetaVector& theta, const SolverSettings& settings, NewtonStats* stats) {
  NewtonStepper stepper(system, settings);
  return stepper.step(x_prev, theta, 0, stats);
}

}  // namespace hydrodae
