#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hydrodae/forcing.hpp"
#include "hydrodae/grid.hpp"
#include "hydrodae/physics.hpp"
#include "hydrodae/state.hpp"

namespace hydrodae {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using SparseColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

enum class Exec { serial, parallel };

struct SystemOptions {
  /// When false the infiltration rate is identically zero.
  bool infiltration = true;
};

/// BDF-1 residual of the semi-explicit DAE and its derivatives.
///
///   r_h = h - h_prev - dt (R - f + (Q_in - Q_out) / A)
///   r_F = F - F_prev - dt f
///   r_Q = Q_d - phi_d(h)
///
/// The Jacobian has a fixed sparsity pattern built once at construction;
/// each cell fills only its own rows, so assembly is data-parallel.
class DescriptorSystem {
 public:
  DescriptorSystem(const CellGrid& grid, const RoutingOperators& routing,
                   RegularizationConstants reg = {}, SystemOptions options = {});

  const CellGrid& grid() const noexcept { return *grid_; }
  const RoutingOperators& routing() const noexcept { return *routing_; }
  const RegularizationConstants& regularization() const noexcept { return reg_; }
  const SystemOptions& options() const noexcept { return options_; }
  const StateLayout& layout() const noexcept { return layout_; }
  int cells() const noexcept { return layout_.cells; }
  int state_size() const noexcept { return layout_.size(); }

  /// Diagonal of the mass matrix: 1 on h and F, 0 on Q.
  Eigen::VectorXd mass_diagonal() const;

  /// Zero-valued Jacobian with the structural pattern.
  const SparseRowMatrix& pattern() const noexcept { return pattern_; }

  /// Either output may be null.
  void evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev, const ThetaVector& theta,
                double dt, Eigen::VectorXd* r, SparseRowMatrix* J, Exec exec = Exec::parallel) const;

  Eigen::VectorXd residual(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev,
                           const ThetaVector& theta, double dt, Exec exec = Exec::parallel) const;
  SparseRowMatrix jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev,
                           const ThetaVector& theta, double dt, Exec exec = Exec::parallel) const;

  /// dr/dtheta, n_x by 5K.
  SparseColMatrix theta_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev,
                                 const ThetaVector& theta, double dt) const;
  /// dr/dx_prev, n_x by n_x; nonzero only in the h and F columns.
  SparseColMatrix prev_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev,
                                const ThetaVector& theta, double dt) const;

  /// Infiltration rate per cell at (x, x_prev).
  Eigen::VectorXd infiltration(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev,
                               const ThetaVector& theta, double dt) const;

  /// phi(h) for all cells, written into the Q blocks of x.
  void apply_discharges(Eigen::VectorXd& x, const Eigen::VectorXd& n, Exec exec = Exec::parallel) const;
  /// State with the given h, F and Q = phi(h).
  Eigen::VectorXd consistent_state(const Eigen::VectorXd& h, const Eigen::VectorXd& F,
                                   const Eigen::VectorXd& n) const;

  /// Discharge leaving the domain through free-drainage faces (m^3/s).
  double boundary_outflow(const Eigen::VectorXd& x) const;
  /// Surface storage sum A h (m^3).
  double storage(const Eigen::VectorXd& x) const;

 private:
  struct CellSlots {
    int h_h, h_F;
    int h_out[4];
    int h_in[4];  // -1 without neighbour
    int F_h, F_F;
    int Q_diag[4];
    int Q_h[4][5];  // -1 when structurally absent
  };

  void fill_cell(int c, const double* x, const double* x_prev, const ThetaVector& theta, double dt,
                 double* r, double* Jv) const;

  const CellGrid* grid_;
  const RoutingOperators* routing_;
  RegularizationConstants reg_;
  SystemOptions options_;
  StateLayout layout_;
  SparseRowMatrix pattern_;
  std::vector<CellSlots> slots_;
};

enum class LinearSolverKind {
  /// Eliminates the Q and F blocks and solves the K x K depth system with
  /// Jacobi-preconditioned BiCGSTAB to a relative residual of 1e-14, falling
  /// back to sparse LU when that fails.
  schur,
  /// Same reduction, always sparse LU.
  schur_lu,
  /// Factors the full n_x system; reference path.
  full_lu,
};

struct SolverSettings {
  double dt = 1.0;
  double newton_tol = 1e-10;
  int max_newton_iters = 25;
  double damping = 1.0;
  int max_halvings = 8;
  int horizon_steps = 0;
  /// Keep every store_stride-th state (0 keeps only the first and last).
  int store_stride = 1;
  LinearSolverKind linear_solver = LinearSolverKind::schur;
  Exec exec = Exec::parallel;

  void validate() const;
};

struct NewtonStats {
  int iterations = 0;
  int halvings = 0;
  std::vector<double> trace;  // ||dx||_2 per iteration
  double projected_depth_volume = 0.0;  // m^3 added by clipping tiny negative h
};

/// Reusable Newton solver for one descriptor system; keeps the symbolic
/// factorization between steps.
class NewtonStepper {
 public:
  NewtonStepper(const DescriptorSystem& system, SolverSettings settings);
  ~NewtonStepper();
  NewtonStepper(const NewtonStepper&) = delete;
  NewtonStepper& operator=(const NewtonStepper&) = delete;

  /// Advances one step; throws StepFailure (carrying `step_index`).
  Eigen::VectorXd step(const Eigen::VectorXd& x_prev, const ThetaVector& theta, int step_index = 0,
                       NewtonStats* stats = nullptr);

  /// Newton increment for J dx = r at x (dx is subtracted from x).
  Eigen::VectorXd increment(const SparseRowMatrix& J, const Eigen::VectorXd& r);

  const SolverSettings& settings() const noexcept { return settings_; }

 private:
  struct Impl;
  const DescriptorSystem& system_;
  SolverSettings settings_;
  Impl* impl_;
};

Eigen::VectorXd newton_solve_step(const DescriptorSystem& system, const Eigen::VectorXd& x_prev,
                                  const ThetaVector& theta, const SolverSettings& settings,
                                  NewtonStats* stats = nullptr);

struct MassLedger {
  double rain = 0.0;
  double infiltration = 0.0;
  double outflow = 0.0;
  double storage_initial = 0.0;
  double storage_final = 0.0;
  double projection = 0.0;

  double closure_error() const;  // |rain - infil - outflow - dStorage| / rain
};

struct SimulationResult {
  std::vector<double> time_s;        // N+1
  std::vector<double> outlet_q;      // N+1, m^3/s
  std::vector<double> storage_m3;    // N+1
  std::vector<double> rain_m3;       // cumulative, N+1
  std::vector<double> infil_m3;      // cumulative, N+1
  std::vector<double> outflow_m3;    // cumulative, N+1
  std::vector<int> newton_iterations;  // per step (substeps for the explicit engine)
  std::vector<int> stored_steps;
  std::vector<Eigen::VectorXd> states;
  Eigen::VectorXd final_state;
  MassLedger ledger;
  double runtime_s = 0.0;

  int steps() const noexcept { return static_cast<int>(time_s.size()) - 1; }
  int peak_step() const;
};

/// Per-step hook: (k, x_k). Called for k = 0..N.
using StateObserver = std::function<void(int, const Eigen::VectorXd&)>;

struct SimulationOptions {
  Eigen::VectorXd h0;  // empty = dry start
  StateObserver observer;
};

/// Rain rate for step k (interval (t_{k-1}, t_k]) scaled per cell.
ThetaVector step_theta(const ModelParameters& params, const Hyetograph& rain, double dt, int k);

SimulationResult simulate(const DescriptorSystem& system, const Hyetograph& rain,
                          const ModelParameters& params, const SolverSettings& settings,
                          const SimulationOptions& options = {});

struct ExplicitSettings {
  double cfl = 0.5;
  long max_substeps = 10'000'000;
  double blowup_depth = 1e3;
};

/// Forward Euler with CFL-limited substeps and an outflow limiter that keeps
/// depths nonnegative.
SimulationResult explicit_baseline_simulate(const DescriptorSystem& system, const Hyetograph& rain,
                                            const ModelParameters& params,
                                            const SolverSettings& settings,
                                            const SimulationOptions& options = {},
                                            const ExplicitSettings& explicit_settings = {});

}  // namespace hydrodae
