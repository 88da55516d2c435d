#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "hydrodae/dae.hpp"
#include "hydrodae/errors.hpp"

using namespace hydrodae;

TEST_SUITE("dae_solver") {

TEST_CASE("dry start without rain stays at the origin") {
  const CellGrid g = make_grid(testing::plane_fields(4, 3));
  const RoutingOperators rt = build_routing_operators(g);
  const DescriptorSystem sys(g, rt);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(sys.state_size());
  SolverSettings s;
  NewtonStats stats;
  const Eigen::VectorXd x1 = newton_solve_step(sys, x0, ThetaVector::nominal(g, 0.0), s, &stats);
  CHECK(x1.cwiseAbs().maxCoeff() == 0.0);
  CHECK(stats.iterations <= 2);
}

TEST_CASE("closed impermeable cell accumulates rain exactly") {
  const CellGrid g = make_grid(testing::single_cell());
  const RoutingOperators rt = build_routing_operators(g);
  const DescriptorSystem sys(g, rt, {}, SystemOptions{false});
  const double R = 25.0 / 3.6e6;
  SolverSettings s;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(6);
  const Eigen::VectorXd x1 = newton_solve_step(sys, x0, ThetaVector::nominal(g, R), s);
  CHECK(x1[0] - x0[0] == doctest::Approx(6.944e-9).epsilon(1e-3));
  CHECK(std::abs(x1[0] - R) <= 1e-12);
  CHECK(x1.tail(4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reduced and full linear solves agree") {
  const CellGrid g = make_grid(testing::plane_fields(6, 5));
  const RoutingOperators rt = build_routing_operators(g);
  const DescriptorSystem sys(g, rt);
  std::mt19937_64 rng(8);
  const Eigen::VectorXd xp = testing::random_state(sys, g.n, rng);
  const ThetaVector th = ThetaVector::nominal(g, 3e-5);
  SolverSettings ref;
  ref.linear_solver = LinearSolverKind::full_lu;
  const Eigen::VectorXd xb = newton_solve_step(sys, xp, th, ref);
  NewtonStepper sb(sys, ref);
  const SparseRowMatrix J = sys.jacobian(xp, xp, th, 1.0);
  const Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(sys.state_size(), -1.0, 1.0);
  const Eigen::VectorXd db = sb.increment(J, r);

  for (LinearSolverKind kind : {LinearSolverKind::schur, LinearSolverKind::schur_lu}) {
    SolverSettings a;
    a.linear_solver = kind;
    const Eigen::VectorXd xa = newton_solve_step(sys, xp, th, a);
    CHECK((xa - xb).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, xa.cwiseAbs().maxCoeff()));
    NewtonStepper sa(sys, a);
    const Eigen::VectorXd da = sa.increment(J, r);
    CHECK((da - db).norm() <= 1e-9 * db.norm());
    CHECK((J * da - r).norm() <= 1e-9 * r.norm());
  }
}

TEST_CASE("iterative reduced solve holds at large dt") {
  const CellGrid g = make_grid(testing::plane_fields(8, 7));
  const RoutingOperators rt = build_routing_operators(g);
  const DescriptorSystem sys(g, rt);
  std::mt19937_64 rng(9);
  const Eigen::VectorXd xp = testing::random_state(sys, g.n, rng, 0.05, 0.3);
  const ThetaVector th = ThetaVector::nominal(g, 3e-5);
  SolverSettings a, b;
  a.dt = b.dt = 600.0;
  b.linear_solver = LinearSolverKind::full_lu;
  const SparseRowMatrix J = sys.jacobian(xp, xp, th, a.dt);
  const Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(sys.state_size(), -1.0, 1.0);
  NewtonStepper sa(sys, a), sb(sys, b);
  const Eigen::VectorXd da = sa.increment(J, r), db = sb.increment(J, r);
  CHECK((J * da - r).norm() <= 1e-9 * r.norm());
  CHECK((da - db).norm() <= 1e-8 * db.norm());
}

TEST_CASE("converged step satisfies the residual and constraints") {
  const CellGrid g = make_grid(testing::plane_fields(5, 5));
  const RoutingOperators rt = build_routing_operators(g);
  const DescriptorSystem sys(g, rt);
  std::mt19937_64 rng(10);
  const Eigen::VectorXd xp = testing::random_state(sys, g.n, rng);
  const ThetaVector th = ThetaVector::nominal(g, 1e-5);
  SolverSettings s;
  NewtonStats stats;
  const Eigen::VectorXd x = newton_solve_step(sys, xp, th, s, &stats);
  CHECK(stats.iterations <= 15);
  CHECK(sys.residual(x, xp, th, s.dt).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(x.head(25).minCoeff() >= 0.0);
  Eigen::VectorXd y = x;
  sys.apply_discharges(y, testing::vec(g.n));
  CHECK((y - x).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("iteration budget exhaustion reports a step failure with its trace") {
  const CellGrid g = make_grid(testing::plane_fields(5, 5));
  const RoutingOperators rt = build_routing_operators(g);
  const DescriptorSystem sys(g, rt);
  std::mt19937_64 rng(12);
  const Eigen::VectorXd xp = testing::random_state(sys, g.n, rng, 0.05, 0.2);
  SolverSettings s;
  s.dt = 60.0;
  s.max_newton_iters = 1;
  s.newton_tol = 1e-14;
  NewtonStepper stepper(sys, s);
  try {
    stepper.step(xp, ThetaVector::nominal(g, 1e-5), 42);
    FAIL("expected a step failure");
  } catch (const StepFailure& e) {
    CHECK(e.step() == 42);
    CHECK(!e.trace().empty());
  }
}

TEST_CASE("settings validation") {
  SolverSettings s;
  CHECK_NOTHROW(s.validate());
  s.dt = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.newton_tol = -1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.max_newton_iters = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

}
