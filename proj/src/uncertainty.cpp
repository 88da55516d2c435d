#include "hydrodae/uncertainty.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <boost/math/distributions/normal.hpp>

#include "hydrodae/errors.hpp"

namespace hydrodae {

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::lognormal: return "lognormal";
    case Family::truncated_gaussian: return "truncated_gaussian";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "gaussian" || name == "normal") return Family::gaussian;
  if (name == "lognormal" || name == "log-normal") return Family::lognormal;
  if (name == "truncated_gaussian" || name == "truncated-gaussian") return Family::truncated_gaussian;
  throw ConfigError("unknown distribution family '" + std::string(name) +
                    "' (expected gaussian, lognormal, truncated_gaussian)");
}

const QuantityUncertainty& UncertaintySpec::of(ThetaKind kind) const {
  switch (kind) {
    case ThetaKind::rain: return rain;
    case ThetaKind::roughness: return roughness;
    case ThetaKind::k_s: return k_s;
    case ThetaKind::psi_f: return psi_f;
    case ThetaKind::eta: return eta;
  }
  return rain;
}

QuantityUncertainty& UncertaintySpec::of(ThetaKind kind) {
  return const_cast<QuantityUncertainty&>(static_cast<const UncertaintySpec*>(this)->of(kind));
}

double UncertaintySpec::noise_variance(StateKind kind) const {
  if (kind == StateKind::h) return var_h;
  if (kind == StateKind::F) return var_f;
  return var_q;
}

void UncertaintySpec::validate() const {
  const char* names[] = {"rain", "roughness", "k_s", "psi_f", "eta"};
  for (int i = 0; i < 5; ++i) {
    const auto& q = of(static_cast<ThetaKind>(i));
    if (!(q.cv >= 0) || !std::isfinite(q.cv))
      throw ConfigError(std::string("uncertainty.") + names[i] + ".cv must be finite and >= 0");
    const Family expected = i == 4 ? Family::truncated_gaussian : Family::lognormal;
    if (q.family != expected)
      throw ConfigError(std::string("uncertainty.") + names[i] + ".family must be " +
                        std::string(to_string(expected)));
  }
  if (!(var_h >= 0 && var_q >= 0 && var_f >= 0)) throw ConfigError("measurement noise variances must be >= 0");
  if (!(level > 0 && level < 1)) throw ConfigError("uncertainty.level must be in (0, 1)");
}

UncertaintySpec UncertaintySpec::none() {
  UncertaintySpec s;
  for (int i = 0; i < 5; ++i) s.of(static_cast<ThetaKind>(i)).cv = 0.0;
  s.var_h = s.var_q = s.var_f = 0.0;
  return s;
}

StepLinearization linearize_step(const DescriptorSystem& system, const Eigen::VectorXd& x_k,
                                 const Eigen::VectorXd& x_prev, const ThetaVector& theta_k, double dt) {
  StepLinearization lin;
  lin.A_psi = system.jacobian(x_k, x_prev, theta_k, dt);
  lin.B_theta = system.theta_jacobian(x_k, x_prev, theta_k, dt);
  lin.P_prev = system.prev_jacobian(x_k, x_prev, theta_k, dt);
  return lin;
}

SparseColMatrix assemble_step_system(const SparseColMatrix& A_psi, const MeasurementMap& m) {
  if (m.rows() > 0 && m.C.cols() != A_psi.cols()) throw NumericalError("measurement matrix width mismatch");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A_psi.nonZeros() + m.rows());
  for (int j = 0; j < A_psi.outerSize(); ++j)
    for (SparseColMatrix::InnerIterator it(A_psi, j); it; ++it) trips.emplace_back(it.row(), j, it.value());
  for (int i = 0; i < m.rows(); ++i) trips.emplace_back(A_psi.rows() + i, m.state_index[i], 1.0);
  SparseColMatrix A(A_psi.rows() + m.rows(), A_psi.cols());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

Eigen::VectorXd theta_variances(const ThetaVector& theta, const UncertaintySpec& spec) {
  Eigen::VectorXd v(theta.values.size());
  for (int i = 0; i < 5; ++i) {
    const auto kind = static_cast<ThetaKind>(i);
    const double cv = spec.of(kind).cv;
    v.segment(i * theta.cells, theta.cells) = (cv * theta.block(kind).array()).square().matrix();
  }
  return v;
}

SparseColMatrix theta_covariance(const ThetaVector& theta, const UncertaintySpec& spec) {
  const Eigen::VectorXd v = theta_variances(theta, spec);
  SparseColMatrix K(v.size(), v.size());
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < v.size(); ++i) trips.emplace_back(i, i, v[i]);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

Eigen::VectorXd noise_variances(const MeasurementMap& m, const UncertaintySpec& spec) {
  Eigen::VectorXd v(m.rows());
  for (int i = 0; i < m.rows(); ++i) v[i] = spec.noise_variance(m.gauges[i].kind);
  return v;
}

Eigen::MatrixXd b_covariance(const Eigen::MatrixXd& K_prev, const Eigen::MatrixXd& E_s, const Eigen::MatrixXd& B_s,
                             const Eigen::VectorXd& theta_var, const Eigen::VectorXd& noise_var) {
  const Eigen::Index ns = E_s.rows();
  if (B_s.rows() != ns || noise_var.size() > ns || B_s.cols() != theta_var.size() || K_prev.rows() != E_s.cols())
    throw NumericalError("b_covariance: dimension mismatch");
  Eigen::MatrixXd K = E_s * K_prev * E_s.transpose() + B_s * theta_var.asDiagonal() * B_s.transpose();
  const Eigen::Index ny = noise_var.size();
  K.bottomRightCorner(ny, ny).diagonal() += noise_var;
  return K;
}

namespace {

// Beyond this the normal equations keep too few significant digits.
constexpr double kMaxCondition = 1e7;

double condition_from_r(const Eigen::VectorXd& rdiag) {
  const Eigen::VectorXd a = rdiag.cwiseAbs();
  const double lo = a.size() ? a.minCoeff() : 0.0;
  return lo > 0 ? a.maxCoeff() / lo : std::numeric_limits<double>::infinity();
}

}  // namespace

Eigen::MatrixXd propagate_covariance_step(const Eigen::MatrixXd& A_s, const Eigen::MatrixXd& K_bs) {
  if (K_bs.rows() != A_s.rows() || K_bs.cols() != A_s.rows())
    throw NumericalError("propagate_covariance_step: K_bs must be n_s x n_s");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A_s);
  const Eigen::VectorXd rdiag = qr.matrixQR().diagonal();
  if (qr.rank() < A_s.cols())
    throw RankError("stacked system is rank deficient (rank " + std::to_string(qr.rank()) + " < " +
                        std::to_string(A_s.cols()) + ")",
                    condition_from_r(rdiag));
  const Eigen::MatrixXd X = qr.solve(K_bs);                // A^+ K_bs
  Eigen::MatrixXd K = qr.solve(Eigen::MatrixXd(X.transpose()));  // A^+ K_bs A^+^T
  return 0.5 * (K + K.transpose());
}

CovarianceRun run_algorithm1(const DescriptorSystem& system, const std::vector<Eigen::VectorXd>& traj,
                             const ModelParameters& params, const Hyetograph& rain, double dt,
                             const MeasurementMap& meas, const UncertaintySpec& spec,
                             const Algorithm1Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  spec.validate();
  if (opt.window < 1 || opt.window > 3) throw ConfigError("covariance.window must be 1, 2 or 3");
  if (traj.empty()) throw NumericalError("empty trajectory");
  const int N = static_cast<int>(traj.size()) - 1;
  const int K = system.cells();
  const int nx = system.state_size();
  const int nd = 2 * K;
  const int ny = meas.rows();
  const int ns = nx + ny;
  const Eigen::VectorXd noise_sd = noise_variances(meas, spec).cwiseSqrt();

  CovarianceRun run;
  run.steps.push_back(0);
  run.variances.push_back(Eigen::VectorXd::Zero(nx));
  Eigen::MatrixXd K_prev = Eigen::MatrixXd::Zero(nx, nx);

  std::vector<StepLinearization> lins(N + 1);
  std::vector<Eigen::VectorXd> theta_sd(N + 1);
  auto ensure = [&](int k) {
    if (lins[k].A_psi.size() > 0) return;
    const ThetaVector th = step_theta(params, rain, dt, k);
    lins[k] = linearize_step(system, traj[k], traj[k - 1], th, dt);
    theta_sd[k] = theta_variances(th, spec).cwiseSqrt();
  };

  // The stacked system is solved through its normal equations,
  // A^+ = (A^T A)^{-1} A^T, with a sparse Cholesky factor. A sparse QR of
  // the same system fills R almost completely on these stencils, while the
  // AMD-ordered factor of A^T A stays sparse. The diagonal of L equals |diag R|
  // of a QR with the same column order, which gives the condition estimate.
  Eigen::SimplicialLLT<SparseColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
  int analyzed_rows = -1;
  for (int k = 1; k <= N; ++k) {
    const int W = std::min(opt.window, N - k + 1);
    for (int j = 0; j < W; ++j) ensure(k + j);
    if (k >= 2) {
      lins[k - 1] = StepLinearization{};
      theta_sd[k - 1].resize(0);
    }

    // Stacked blocks: rows [j*ns, j*ns + nx) hold the residual of step k+j,
    // the following ny rows its measurements.
    std::vector<Eigen::Triplet<double>> trips;
    for (int j = 0; j < W; ++j) {
      const StepLinearization& L = lins[k + j];
      for (int c = 0; c < nx; ++c)
        for (SparseColMatrix::InnerIterator it(L.A_psi, c); it; ++it)
          trips.emplace_back(j * ns + it.row(), j * nx + c, it.value());
      if (j > 0)
        for (int c = 0; c < nx; ++c)
          for (SparseColMatrix::InnerIterator it(L.P_prev, c); it; ++it)
            trips.emplace_back(j * ns + it.row(), (j - 1) * nx + c, it.value());
      for (int i = 0; i < ny; ++i) trips.emplace_back(j * ns + nx + i, j * nx + meas.state_index[i], 1.0);
    }
    SparseColMatrix A(W * ns, W * nx);
    A.setFromTriplets(trips.begin(), trips.end());
    const SparseColMatrix At = A.transpose();
    const SparseColMatrix AtA = At * A;
    if (analyzed_rows != A.rows()) {
      llt.analyzePattern(AtA);
      analyzed_rows = static_cast<int>(A.rows());
    }
    llt.factorize(AtA);
    double cond = std::numeric_limits<double>::infinity();
    if (llt.info() == Eigen::Success) {
      const Eigen::VectorXd ldiag = SparseColMatrix(llt.matrixL()).diagonal();
      cond = condition_from_r(ldiag);
    }
    if (!(cond <= kMaxCondition))
      throw RankError("stacked system is numerically rank deficient at step " + std::to_string(k) +
                          " (condition estimate " + std::to_string(cond) + ")",
                      cond, k);
    run.max_condition = std::max(run.max_condition, cond);

    // Source columns: previous differential states, then parameters and
    // noise (each column scaled by its standard deviation).
    int n_other = W * ny;
    for (int j = 0; j < W; ++j) n_other += static_cast<int>((theta_sd[k + j].array() > 0).count());
    trips.clear();
    const SparseColMatrix& P = lins[k].P_prev;
    for (int c = 0; c < nd; ++c)
      for (SparseColMatrix::InnerIterator it(P, c); it; ++it) trips.emplace_back(it.row(), c, it.value());
    int col = nd;
    for (int j = 0; j < W; ++j) {
      const SparseColMatrix& B = lins[k + j].B_theta;
      for (int t = 0; t < B.cols(); ++t) {
        const double sd = theta_sd[k + j][t];
        if (!(sd > 0)) continue;
        for (SparseColMatrix::InnerIterator it(B, t); it; ++it) trips.emplace_back(j * ns + it.row(), col, it.value() * sd);
        ++col;
      }
      for (int i = 0; i < ny; ++i) trips.emplace_back(j * ns + nx + i, col++, noise_sd[i]);
    }
    SparseColMatrix S(W * ns, nd + n_other);
    S.setFromTriplets(trips.begin(), trips.end());

    const Eigen::MatrixXd Y = Eigen::MatrixXd(llt.solve(Eigen::MatrixXd(At * S))).topRows(nx);
    Eigen::MatrixXd Kx = Eigen::MatrixXd::Zero(nx, nx);
    if (k > 1) {
      const Eigen::MatrixXd M = Y.leftCols(nd) * K_prev.topLeftCorner(nd, nd);
      Kx.triangularView<Eigen::Lower>() += M * Y.leftCols(nd).transpose();
    }
    if (n_other > 0) Kx.selfadjointView<Eigen::Lower>().rankUpdate(Y.rightCols(n_other));
    Kx.triangularView<Eigen::StrictlyUpper>() = Kx.transpose();
    if (!Kx.allFinite()) throw NumericalError("non-finite covariance at step " + std::to_string(k));

    if (opt.on_step) opt.on_step(k, Kx);
    if (opt.variance_stride > 0 && (k % opt.variance_stride == 0 || k == N)) {
      run.steps.push_back(k);
      run.variances.push_back(Kx.diagonal());
    }
    K_prev.swap(Kx);
  }
  run.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

double two_sided_z(double level) {
  static const boost::math::normal_distribution<double> unit;
  return boost::math::quantile(unit, 0.5 * (1.0 + level));
}

Interval confidence_interval(double x0, double var, Family family, double level, bool nonnegative) {
  if (!(var > 0)) return {x0, x0};
  const double z = two_sided_z(level);
  const double sd = std::sqrt(var);
  Interval iv{x0 - z * sd, x0 + z * sd};
  if (family == Family::lognormal && x0 > 0) {
    const double s2 = std::log1p(var / (x0 * x0));
    const double mu = std::log(x0) - 0.5 * s2;
    const double s = std::sqrt(s2);
    iv = {std::exp(mu - z * s), std::exp(mu + z * s)};
  } else if (family == Family::truncated_gaussian) {
    iv = {std::clamp(iv.lo, 0.0, 1.0), std::clamp(iv.hi, 0.0, 1.0)};
  }
  if (nonnegative) iv.lo = std::max(iv.lo, 0.0);
  return iv;
}

}  // namespace hydrodae
