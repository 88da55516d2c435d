#include "hydrodae/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "hydrodae/errors.hpp"

namespace hydrodae {

std::string_view to_string(SpatialMode m) noexcept { return m == SpatialMode::iid ? "iid" : "correlated"; }

SpatialMode parse_spatial_mode(std::string_view name) {
  if (name == "correlated") return SpatialMode::correlated;
  if (name == "iid") return SpatialMode::iid;
  throw ConfigError("unknown spatial mode '" + std::string(name) + "' (expected correlated, iid)");
}

std::string_view to_string(Engine e) noexcept { return e == Engine::dae ? "dae" : "explicit"; }

Engine parse_engine(std::string_view name) {
  if (name == "dae") return Engine::dae;
  if (name == "explicit") return Engine::explicit_euler;
  throw ConfigError("unknown engine '" + std::string(name) + "' (expected dae, explicit)");
}

void EnsembleSpec::validate() const {
  if (n_samples < 2) throw ConfigError("ensemble.samples must be >= 2");
  uncertainty.validate();
}

Eigen::MatrixXd lhs_unit(int n, int dims, std::uint64_t seed) {
  if (n < 1 || dims < 0) throw ConfigError("LHS needs n >= 1 and dims >= 0");
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd u(n, dims);
  std::vector<int> perm(n);
  for (int d = 0; d < dims; ++d) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(perm[i], perm[j]);
    }
    for (int i = 0; i < n; ++i) {
      const double jitter = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
      u(i, d) = (perm[i] + jitter) / n;
    }
  }
  return u;
}

double sample_quantile(Family family, double mean, double cv, double u) {
  if (!(mean > 0)) return 0.0;
  if (!(cv > 0)) return mean;
  static const boost::math::normal_distribution<double> unit;
  switch (family) {
    case Family::lognormal: {
      const double s2 = std::log1p(cv * cv);
      return std::exp(std::log(mean) - 0.5 * s2 + std::sqrt(s2) * boost::math::quantile(unit, u));
    }
    case Family::gaussian:
      return mean + cv * mean * boost::math::quantile(unit, u);
    case Family::truncated_gaussian: {
      const double sd = cv * mean;
      const double lo = boost::math::cdf(unit, (0.0 - mean) / sd);
      const double hi = boost::math::cdf(unit, (1.0 - mean) / sd);
      const double p = std::clamp(lo + u * (hi - lo), std::numeric_limits<double>::min(), 1.0 - 0x1.0p-53);
      return std::clamp(mean + sd * boost::math::quantile(unit, p), 0.0, 1.0);
    }
  }
  return mean;
}

std::vector<ModelParameters> lhs_sample(const EnsembleSpec& spec, const ModelParameters& nominal) {
  spec.validate();
  const int K = nominal.cells();
  const int per = spec.mode == SpatialMode::correlated ? 1 : K;
  const Eigen::MatrixXd u = lhs_unit(spec.n_samples, 5 * per, spec.seed);
  const UncertaintySpec& us = spec.uncertainty;

  std::vector<ModelParameters> out(spec.n_samples, nominal);
  for (int s = 0; s < spec.n_samples; ++s) {
    ModelParameters& p = out[s];
    for (int c = 0; c < K; ++c) {
      const int j = spec.mode == SpatialMode::correlated ? 0 : c;
      auto draw = [&](ThetaKind kind, double mean) {
        const auto& q = us.of(kind);
        return sample_quantile(q.family, mean, q.cv, u(s, static_cast<int>(kind) * per + j));
      };
      p.rain_scale[c] = draw(ThetaKind::rain, nominal.rain_scale[c]);
      p.n[c] = draw(ThetaKind::roughness, nominal.n[c]);
      p.k_s[c] = draw(ThetaKind::k_s, nominal.k_s[c]);
      p.psi_f[c] = draw(ThetaKind::psi_f, nominal.psi_f[c]);
      p.eta[c] = draw(ThetaKind::eta, nominal.eta[c]);
    }
  }
  return out;
}

EnsembleStats run_ensemble(const DescriptorSystem& system, const Hyetograph& rain,
                           const std::vector<ModelParameters>& realizations, const SolverSettings& settings,
                           const EnsembleOptions& options) {
  const int S = static_cast<int>(realizations.size());
  const int N = settings.horizon_steps;
  const int K = system.cells();
  if (S < 2) throw ConfigError("ensemble needs at least 2 realizations");
  for (int k : options.snapshot_steps)
    if (k < 0 || k > N) throw ConfigError("snapshot step " + std::to_string(k) + " is outside the horizon");

  SolverSettings local = settings;
  local.exec = Exec::serial;
  local.store_stride = 0;
  const int n_snap = static_cast<int>(options.snapshot_steps.size());

  EnsembleStats st;
  st.n_samples = S;
  st.snapshot_steps = options.snapshot_steps;
  st.outlet_q = Eigen::MatrixXd::Constant(N + 1, S, std::numeric_limits<double>::quiet_NaN());
  std::vector<Eigen::MatrixXd> snaps(n_snap, Eigen::MatrixXd::Zero(K, S));
  std::vector<char> ok(S, 0);

#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < S; ++s) {
    SimulationOptions so;
    so.observer = [&, s](int k, const Eigen::VectorXd& x) {
      for (int i = 0; i < n_snap; ++i)
        if (options.snapshot_steps[i] == k) snaps[i].col(s) = x.head(K);
    };
    try {
      const SimulationResult r =
          options.engine == Engine::dae
              ? simulate(system, rain, realizations[s], local, so)
              : explicit_baseline_simulate(system, rain, realizations[s], local, so, options.explicit_settings);
      st.outlet_q.col(s) = Eigen::Map<const Eigen::VectorXd>(r.outlet_q.data(), N + 1);
      ok[s] = 1;
    } catch (const NumericalError&) {
      ok[s] = 0;
    }
  }

  std::vector<int> good;
  for (int s = 0; s < S; ++s) (ok[s] ? good : st.failed).push_back(s);
  if (st.failed.size() > options.max_failure_fraction * S || good.size() < 2)
    throw NumericalError("ensemble aborted: " + std::to_string(st.failed.size()) + " of " + std::to_string(S) +
                         " realizations failed");

  const double n_ok = static_cast<double>(good.size());
  auto moments = [&](const auto& value, Eigen::Index rows, Eigen::VectorXd& mean, Eigen::VectorXd& var) {
    mean = Eigen::VectorXd::Zero(rows);
    var = Eigen::VectorXd::Zero(rows);
    for (int s : good) mean += value(s);
    mean /= n_ok;
    for (int s : good) var += (value(s) - mean).array().square().matrix();
    var /= (n_ok - 1.0);
  };
  moments([&](int s) { return st.outlet_q.col(s); }, N + 1, st.q_mean, st.q_var);
  st.q_min = Eigen::VectorXd::Constant(N + 1, std::numeric_limits<double>::infinity());
  st.q_max = Eigen::VectorXd::Constant(N + 1, -std::numeric_limits<double>::infinity());
  for (int s : good) {
    st.q_min = st.q_min.cwiseMin(st.outlet_q.col(s));
    st.q_max = st.q_max.cwiseMax(st.outlet_q.col(s));
  }
  st.h_mean.resize(n_snap);
  st.h_var.resize(n_snap);
  for (int i = 0; i < n_snap; ++i) moments([&](int s) { return snaps[i].col(s); }, K, st.h_mean[i], st.h_var[i]);
  return st;
}

LogLogFit loglog_fit(const Eigen::VectorXd& sigma_pse, const Eigen::VectorXd& sigma_mc, double floor) {
  if (sigma_pse.size() != sigma_mc.size()) throw FitError("sigma fields have different lengths");
  std::vector<double> xs, ys;
  for (Eigen::Index i = 0; i < sigma_pse.size(); ++i) {
    if (sigma_pse[i] > floor && sigma_mc[i] > floor && std::isfinite(sigma_pse[i]) && std::isfinite(sigma_mc[i])) {
      xs.push_back(std::log10(sigma_mc[i]));
      ys.push_back(std::log10(sigma_pse[i]));
    }
  }
  const int n = static_cast<int>(xs.size());
  if (n < 3) throw FitError("log-log fit needs at least 3 positive pairs, found " + std::to_string(n));
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0)) throw FitError("log-log fit is degenerate: all sigma_mc values are equal");
  LogLogFit fit;
  fit.n_pairs = n;
  fit.a = sxy / sxx;
  fit.b = my - fit.a * mx;
  double ss_res = 0;
  for (int i = 0; i < n; ++i) {
    const double e = ys[i] - (fit.a * xs[i] + fit.b);
    ss_res += e * e;
  }
  fit.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace hydrodae
