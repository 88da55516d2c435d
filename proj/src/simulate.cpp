#include <algorithm>
#include <chrono>
#include <cmath>

#include "hydrodae/dae.hpp"
#include "hydrodae/errors.hpp"

namespace hydrodae {

double MassLedger::closure_error() const {
  const double imbalance = rain - infiltration - outflow - (storage_final - storage_initial);
  return rain > 0 ? std::abs(imbalance) / rain : std::abs(imbalance);
}

int SimulationResult::peak_step() const {
  if (outlet_q.empty()) return -1;
  return static_cast<int>(std::max_element(outlet_q.begin(), outlet_q.end()) - outlet_q.begin());
}

ThetaVector step_theta(const ModelParameters& params, const Hyetograph& rain, double dt, int k) {
  const double rate = k >= 1 ? rain.average_rate((k - 1) * dt, k * dt) : rain.rate(0.0);
  return params.theta(rate);
}

namespace detail {

void record_state(SimulationResult& res, const DescriptorSystem& sys, const SolverSettings& s,
                  const SimulationOptions& opt, int k, const Eigen::VectorXd& x) {
  const int N = s.horizon_steps;
  res.time_s.push_back(k * s.dt);
  res.outlet_q.push_back(sys.boundary_outflow(x));
  res.storage_m3.push_back(sys.storage(x));
  const bool keep = s.store_stride > 0 ? (k % s.store_stride == 0 || k == N) : (k == 0 || k == N);
  if (keep) {
    res.stored_steps.push_back(k);
    res.states.push_back(x);
  }
  if (opt.observer) opt.observer(k, x);
}

Eigen::VectorXd initial_state(const DescriptorSystem& sys, const ModelParameters& params,
                              const SimulationOptions& opt) {
  const int K = sys.cells();
  if (params.cells() != K) throw ConfigError("parameter fields do not match the grid");
  Eigen::VectorXd h0 = opt.h0.size() ? opt.h0 : Eigen::VectorXd::Zero(K);
  if (h0.size() != K) throw ConfigError("initial depth has the wrong size");
  if ((h0.array() < 0).any()) throw ConfigError("initial depth must be >= 0");
  return sys.consistent_state(h0, Eigen::VectorXd::Zero(K), params.n);
}

}  // namespace detail

SimulationResult simulate(const DescriptorSystem& system, const Hyetograph& rain, const ModelParameters& params,
                          const SolverSettings& settings, const SimulationOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  settings.validate();
  rain.validate();
  const int N = settings.horizon_steps;
  const double dt = settings.dt;
  const double area = system.grid().cell_area();

  SimulationResult res;
  Eigen::VectorXd x = detail::initial_state(system, params, options);
  detail::record_state(res, system, settings, options, 0, x);
  res.rain_m3.push_back(0.0);
  res.infil_m3.push_back(0.0);
  res.outflow_m3.push_back(0.0);
  res.ledger.storage_initial = res.storage_m3.front();

  NewtonStepper stepper(system, settings);
  NewtonStats stats;
  for (int k = 1; k <= N; ++k) {
    const ThetaVector theta = step_theta(params, rain, dt, k);
    Eigen::VectorXd x_next = stepper.step(x, theta, k, &stats);
    res.newton_iterations.push_back(stats.iterations);
    res.ledger.projection += stats.projected_depth_volume;
    res.ledger.rain += dt * area * theta.block(ThetaKind::rain).sum();
    res.ledger.infiltration += dt * area * system.infiltration(x_next, x, theta, dt).sum();
    res.ledger.outflow += dt * system.boundary_outflow(x_next);
    res.rain_m3.push_back(res.ledger.rain);
    res.infil_m3.push_back(res.ledger.infiltration);
    res.outflow_m3.push_back(res.ledger.outflow);
    x.swap(x_next);
    detail::record_state(res, system, settings, options, k, x);
  }
  res.ledger.storage_final = res.storage_m3.back();
  res.final_state = x;
  res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace hydrodae
