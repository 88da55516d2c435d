#include "hydrodae/dae.hpp"

#include <algorithm>

#include "hydrodae/errors.hpp"

namespace hydrodae {

DescriptorSystem::DescriptorSystem(const CellGrid& grid, const RoutingOperators& routing,
                                   RegularizationConstants reg, SystemOptions options)
    : grid_(&grid), routing_(&routing), reg_(reg), options_(options), layout_{grid.num_cells()} {
  reg_.validate();
  const int K = layout_.cells;
  const auto H = [&](int c) { return layout_.index(StateKind::h, c); };
  const auto Fi = [&](int c) { return layout_.index(StateKind::F, c); };
  const auto Qi = [&](int d, int c) { return layout_.index(discharge_kind(static_cast<Direction>(d)), c); };

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(36 * static_cast<std::size_t>(K));
  for (int c = 0; c < K; ++c) {
    trips.emplace_back(H(c), H(c), 0.0);
    trips.emplace_back(H(c), Fi(c), 0.0);
    for (int d = 0; d < 4; ++d) {
      trips.emplace_back(H(c), Qi(d, c), 0.0);
      const int nb = routing.neighbor[d][c];
      if (nb >= 0) trips.emplace_back(H(c), Qi(index_of(opposite(static_cast<Direction>(d))), nb), 0.0);
    }
    trips.emplace_back(Fi(c), H(c), 0.0);
    trips.emplace_back(Fi(c), Fi(c), 0.0);
    for (int d = 0; d < 4; ++d) {
      trips.emplace_back(Qi(d, c), Qi(d, c), 0.0);
      if (routing.face[d][c] == FaceKind::closed) continue;
      trips.emplace_back(Qi(d, c), H(c), 0.0);
      for (int e = 0; e < 4; ++e)
        if (routing.face[e][c] == FaceKind::neighbor) trips.emplace_back(Qi(d, c), H(routing.neighbor[e][c]), 0.0);
    }
  }
  pattern_.resize(layout_.size(), layout_.size());
  pattern_.setFromTriplets(trips.begin(), trips.end());
  pattern_.makeCompressed();

  const auto slot = [&](int row, int col) {
    const int* inner = pattern_.innerIndexPtr();
    const int begin = pattern_.outerIndexPtr()[row];
    const int end = pattern_.outerIndexPtr()[row + 1];
    const int* it = std::lower_bound(inner + begin, inner + end, col);
    return static_cast<int>(it - inner);
  };
  slots_.resize(K);
  for (int c = 0; c < K; ++c) {
    CellSlots& s = slots_[c];
    s.h_h = slot(H(c), H(c));
    s.h_F = slot(H(c), Fi(c));
    s.F_h = slot(Fi(c), H(c));
    s.F_F = slot(Fi(c), Fi(c));
    for (int d = 0; d < 4; ++d) {
      s.h_out[d] = slot(H(c), Qi(d, c));
      const int nb = routing.neighbor[d][c];
      s.h_in[d] = nb >= 0 ? slot(H(c), Qi(index_of(opposite(static_cast<Direction>(d))), nb)) : -1;
      s.Q_diag[d] = slot(Qi(d, c), Qi(d, c));
      const bool open = routing.face[d][c] != FaceKind::closed;
      s.Q_h[d][0] = open ? slot(Qi(d, c), H(c)) : -1;
      for (int e = 0; e < 4; ++e)
        s.Q_h[d][1 + e] = open && routing.face[e][c] == FaceKind::neighbor
                              ? slot(Qi(d, c), H(routing.neighbor[e][c]))
                              : -1;
    }
  }
}

Eigen::VectorXd DescriptorSystem::mass_diagonal() const {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(layout_.size());
  e.head(layout_.differential_size()).setOnes();
  return e;
}

void DescriptorSystem::fill_cell(int c, const double* x, const double* xp, const ThetaVector& th,
                                 double dt, double* r, double* Jv) const {
  const int K = layout_.cells;
  const double A = grid_->cell_area();
  const double h = x[c], F = x[K + c];
  const double hp = xp[c], Fp = xp[K + c];
  const double R = th.rain(c);

  InfiltrationEval inf;
  if (options_.infiltration)
    inf = evaluate_infiltration(hp, R, F, h, {th.k_s(c), th.psi_f(c), th.eta(c)}, dt, reg_);

  double q_out = 0.0, q_in = 0.0;
  for (int d = 0; d < 4; ++d) {
    q_out += x[(2 + d) * K + c];
    const int nb = routing_->neighbor[d][c];
    if (nb >= 0) q_in += x[(2 + index_of(opposite(static_cast<Direction>(d)))) * K + nb];
  }

  DischargeGradient grad;
  const CellStencil st = make_stencil(c, x, th.values.data() + K, *grid_, *routing_);
  const DirectionalFlux flux = manning_map(st, reg_, Jv ? &grad : nullptr);

  if (r) {
    r[c] = h - hp - dt * (R - inf.rate + (q_in - q_out) / A);
    r[K + c] = F - Fp - dt * inf.rate;
    for (int d = 0; d < 4; ++d) r[(2 + d) * K + c] = x[(2 + d) * K + c] - flux.Q[d];
  }
  if (Jv) {
    const CellSlots& s = slots_[c];
    Jv[s.h_h] = 1.0 + dt * inf.d_h;
    Jv[s.h_F] = dt * inf.d_F;
    Jv[s.F_h] = -dt * inf.d_h;
    Jv[s.F_F] = 1.0 - dt * inf.d_F;
    for (int d = 0; d < 4; ++d) {
      Jv[s.h_out[d]] = dt / A;
      if (s.h_in[d] >= 0) Jv[s.h_in[d]] = -dt / A;
      Jv[s.Q_diag[d]] = 1.0;
      for (int j = 0; j < 5; ++j)
        if (s.Q_h[d][j] >= 0) Jv[s.Q_h[d][j]] = -grad.d_h[d][j];
    }
  }
}

void DescriptorSystem::evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev,
                                const ThetaVector& theta, double dt, Eigen::VectorXd* r,
                                SparseRowMatrix* J, Exec exec) const {
  const int K = layout_.cells;
  if (x.size() != layout_.size() || x_prev.size() != layout_.size() || theta.cells != K)
    throw NumericalError("state or parameter vector has the wrong size");
  if (r) r->resize(layout_.size());
  if (J && (J->rows() != pattern_.rows() || J->nonZeros() != pattern_.nonZeros() || !J->isCompressed()))
    *J = pattern_;
  double* rp = r ? r->data() : nullptr;
  double* jp = J ? J->valuePtr() : nullptr;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int c = 0; c < K; ++c) fill_cell(c, x.data(), x_prev.data(), theta, dt, rp, jp);
}

Eigen::VectorXd DescriptorSystem::residual(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev,
                                           const ThetaVector& theta, double dt, Exec exec) const {
  Eigen::VectorXd r;
  evaluate(x, x_prev, theta, dt, &r, nullptr, exec);
  return r;
}

SparseRowMatrix DescriptorSystem::jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev,
                                           const ThetaVector& theta, double dt, Exec exec) const {
  SparseRowMatrix J = pattern_;
  evaluate(x, x_prev, theta, dt, nullptr, &J, exec);
  return J;
}

SparseColMatrix DescriptorSystem::theta_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev,
                                                 const ThetaVector& th, double dt) const {
  const int K = layout_.cells;
  const ThetaLayout tl{K};
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(16 * static_cast<std::size_t>(K));
  for (int c = 0; c < K; ++c) {
    const int hr = layout_.index(StateKind::h, c);
    const int fr = layout_.index(StateKind::F, c);
    InfiltrationEval inf;
    if (options_.infiltration)
      inf = evaluate_infiltration(x_prev[c], th.rain(c), x[K + c], x[c], {th.k_s(c), th.psi_f(c), th.eta(c)},
                                  dt, reg_);
    trips.emplace_back(hr, tl.index(ThetaKind::rain, c), -dt + dt * inf.d_supply);
    trips.emplace_back(fr, tl.index(ThetaKind::rain, c), -dt * inf.d_supply);
    const std::pair<ThetaKind, double> soil[] = {
        {ThetaKind::k_s, inf.d_k_s}, {ThetaKind::psi_f, inf.d_psi_f}, {ThetaKind::eta, inf.d_eta}};
    for (auto [kind, deriv] : soil) {
      trips.emplace_back(hr, tl.index(kind, c), dt * deriv);
      trips.emplace_back(fr, tl.index(kind, c), -dt * deriv);
    }
    DischargeGradient grad;
    manning_map(make_stencil(c, x.data(), th.values.data() + K, *grid_, *routing_), reg_, &grad);
    for (int d = 0; d < 4; ++d)
      if (routing_->face[d][c] != FaceKind::closed)
        trips.emplace_back(layout_.index(discharge_kind(static_cast<Direction>(d)), c),
                           tl.index(ThetaKind::roughness, c), -grad.d_n[d]);
  }
  SparseColMatrix B(layout_.size(), tl.size());
  B.setFromTriplets(trips.begin(), trips.end());
  return B;
}

SparseColMatrix DescriptorSystem::prev_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev,
                                                const ThetaVector& th, double dt) const {
  const int K = layout_.cells;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(3 * static_cast<std::size_t>(K));
  for (int c = 0; c < K; ++c) {
    double ds = 0.0;
    if (options_.infiltration)
      ds = evaluate_infiltration(x_prev[c], th.rain(c), x[K + c], x[c], {th.k_s(c), th.psi_f(c), th.eta(c)}, dt,
                                 reg_)
               .d_supply;
    // i_a = h_prev / dt + R, so df/dh_prev = d_supply / dt.
    trips.emplace_back(c, c, -1.0 + ds);
    trips.emplace_back(K + c, c, -ds);
    trips.emplace_back(K + c, K + c, -1.0);
  }
  SparseColMatrix P(layout_.size(), layout_.size());
  P.setFromTriplets(trips.begin(), trips.end());
  return P;
}

Eigen::VectorXd DescriptorSystem::infiltration(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prev,
                                               const ThetaVector& th, double dt) const {
  const int K = layout_.cells;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(K);
  if (!options_.infiltration) return f;
  for (int c = 0; c < K; ++c)
    f[c] = infiltration_rate(x_prev[c], th.rain(c), x[K + c], x[c], {th.k_s(c), th.psi_f(c), th.eta(c)}, dt, reg_);
  return f;
}

void DescriptorSystem::apply_discharges(Eigen::VectorXd& x, const Eigen::VectorXd& n, Exec exec) const {
  const int K = layout_.cells;
  double* xp = x.data();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int c = 0; c < K; ++c) {
    const DirectionalFlux f = manning_map(make_stencil(c, xp, n.data(), *grid_, *routing_), reg_);
    for (int d = 0; d < 4; ++d) xp[(2 + d) * K + c] = f.Q[d];
  }
}

Eigen::VectorXd DescriptorSystem::consistent_state(const Eigen::VectorXd& h, const Eigen::VectorXd& F,
                                                   const Eigen::VectorXd& n) const {
  const int K = layout_.cells;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(layout_.size());
  x.head(K) = h;
  x.segment(K, K) = F;
  apply_discharges(x, n);
  return x;
}

double DescriptorSystem::boundary_outflow(const Eigen::VectorXd& x) const {
  const int K = layout_.cells;
  double q = 0.0;
  for (int c : grid_->outlet_cells)
    for (int d = 0; d < 4; ++d)
      if (routing_->face[d][c] == FaceKind::free_drainage) q += x[(2 + d) * K + c];
  return q;
}

double DescriptorSystem::storage(const Eigen::VectorXd& x) const {
  return x.head(layout_.cells).sum() * grid_->cell_area();
}

}  // namespace hydrodae
