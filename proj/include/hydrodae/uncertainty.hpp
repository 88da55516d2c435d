#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hydrodae/dae.hpp"
#include "hydrodae/measurement.hpp"

namespace hydrodae {

enum class Family { gaussian, lognormal, truncated_gaussian };

std::string_view to_string(Family f) noexcept;
Family parse_family(std::string_view name);

struct QuantityUncertainty {
  Family family = Family::lognormal;
  double cv = 0.0;
};

struct UncertaintySpec {
  QuantityUncertainty rain{Family::lognormal, 0.25};
  QuantityUncertainty roughness{Family::lognormal, 0.20};
  QuantityUncertainty k_s{Family::lognormal, 0.25};
  QuantityUncertainty psi_f{Family::lognormal, 0.10};
  QuantityUncertainty eta{Family::truncated_gaussian, 0.12};
  double var_h = 2.5e-7;  // m^2
  double var_q = 1e-8;    // (m^3/s)^2
  double var_f = 2.5e-5;  // m^2
  /// Family used for state confidence intervals.
  Family interval_family = Family::gaussian;
  double level = 0.95;

  const QuantityUncertainty& of(ThetaKind kind) const;
  QuantityUncertainty& of(ThetaKind kind);
  double noise_variance(StateKind kind) const;
  void validate() const;
  /// All CVs and noise variances zero.
  static UncertaintySpec none();
};

struct StepLinearization {
  SparseColMatrix A_psi;   // dr/dx_k
  SparseColMatrix B_theta; // dr/dtheta_k
  SparseColMatrix P_prev;  // dr/dx_{k-1}
};

StepLinearization linearize_step(const DescriptorSystem& system, const Eigen::VectorXd& x_k,
                                 const Eigen::VectorXd& x_prev, const ThetaVector& theta_k, double dt);

/// [A_psi; C].
SparseColMatrix assemble_step_system(const SparseColMatrix& A_psi, const MeasurementMap& measurement);

/// Diagonal of K_theta: (CV * mean)^2 per entry.
Eigen::VectorXd theta_variances(const ThetaVector& theta, const UncertaintySpec& spec);
SparseColMatrix theta_covariance(const ThetaVector& theta, const UncertaintySpec& spec);

/// Measurement noise variance per gauge row.
Eigen::VectorXd noise_variances(const MeasurementMap& measurement, const UncertaintySpec& spec);

/// K_bs = E_s K_prev E_s^T + B_s K_theta B_s^T + K_v^s, where E_s and B_s
/// already include the trailing zero measurement rows.
Eigen::MatrixXd b_covariance(const Eigen::MatrixXd& K_prev, const Eigen::MatrixXd& E_s,
                             const Eigen::MatrixXd& B_s, const Eigen::VectorXd& theta_var,
                             const Eigen::VectorXd& noise_var);

/// K_xx = A^+ K_bs A^+^T with A^+ from a column-pivoting QR; symmetrized.
/// Throws RankError when A_s lacks full column rank.
Eigen::MatrixXd propagate_covariance_step(const Eigen::MatrixXd& A_s, const Eigen::MatrixXd& K_bs);

struct Algorithm1Options {
  /// Number of consecutive steps stacked per solve (1..3).
  int window = 1;
  /// Keep variances every variance_stride steps (0 keeps none).
  int variance_stride = 1;
  /// Called with (k, K_xx(k)) for k = 1..N.
  std::function<void(int, const Eigen::MatrixXd&)> on_step;
};

struct CovarianceRun {
  std::vector<int> steps;                   // steps with stored variances, includes 0
  std::vector<Eigen::VectorXd> variances;   // diag K_xx(k)
  double max_condition = 0.0;
  double runtime_s = 0.0;
};

/// Closed-form covariance recursion along a nominal trajectory of N+1
/// states (x_0 .. x_N). K_xx(0) = 0.
CovarianceRun run_algorithm1(const DescriptorSystem& system, const std::vector<Eigen::VectorXd>& trajectory,
                             const ModelParameters& params, const Hyetograph& rain, double dt,
                             const MeasurementMap& measurement, const UncertaintySpec& spec,
                             const Algorithm1Options& options = {});

struct Interval {
  double lo;
  double hi;
};

/// Two-sided interval at `level`. Lower bound clipped at 0 when
/// `nonnegative` is set.
Interval confidence_interval(double x0, double var, Family family, double level, bool nonnegative = true);

/// Standard normal quantile z with P(|Z| <= z) = level.
double two_sided_z(double level);

}  // namespace hydrodae
