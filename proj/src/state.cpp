#include "hydrodae/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hydrodae/errors.hpp"
#include "hydrodae/forcing.hpp"

namespace hydrodae {

std::string_view to_string(StateKind k) noexcept {
  switch (k) {
    case StateKind::h: return "h";
    case StateKind::F: return "F";
    case StateKind::Q_left: return "Q_L";
    case StateKind::Q_right: return "Q_R";
    case StateKind::Q_up: return "Q_U";
    case StateKind::Q_down: return "Q_D";
  }
  return "?";
}

StateKind parse_state_kind(std::string_view name) {
  if (name == "h") return StateKind::h;
  if (name == "F") return StateKind::F;
  if (name == "Q_L" || name == "Q_left") return StateKind::Q_left;
  if (name == "Q_R" || name == "Q_right") return StateKind::Q_right;
  if (name == "Q_U" || name == "Q_up") return StateKind::Q_up;
  if (name == "Q_D" || name == "Q_down") return StateKind::Q_down;
  throw ConfigError("unknown state kind '" + std::string(name) + "' (expected h, F, Q_L, Q_R, Q_U, Q_D)");
}

ThetaVector ThetaVector::nominal(const CellGrid& grid, double rain_rate) {
  return ModelParameters::from_grid(grid).theta(rain_rate);
}

void Hyetograph::validate() const {
  if (time_s.empty() || time_s.size() != intensity_mm_h.size())
    throw ConfigError("hyetograph needs matching, non-empty time and intensity lists");
  if (time_s.front() != 0.0) throw ConfigError("hyetograph must start at t = 0");
  for (std::size_t i = 1; i < time_s.size(); ++i)
    if (!(time_s[i] > time_s[i - 1])) throw ConfigError("hyetograph times must increase strictly");
  for (double v : intensity_mm_h)
    if (!(v >= 0) || !std::isfinite(v)) throw ConfigError("hyetograph intensities must be finite and >= 0");
}

double Hyetograph::rate(double t) const {
  auto it = std::upper_bound(time_s.begin(), time_s.end(), t);
  if (it == time_s.begin()) return 0.0;
  return intensity_mm_h[static_cast<std::size_t>(it - time_s.begin()) - 1] * kMmPerHourToMs;
}

double Hyetograph::depth(double t0, double t1) const {
  double total = 0.0;
  for (std::size_t i = 0; i < time_s.size(); ++i) {
    const double a = std::max(t0, time_s[i]);
    const double b = i + 1 < time_s.size() ? std::min(t1, time_s[i + 1]) : t1;
    if (b > a) total += (b - a) * intensity_mm_h[i];
  }
  return total * kMmPerHourToMs;
}

ModelParameters ModelParameters::from_grid(const CellGrid& grid) {
  const int K = grid.num_cells();
  ModelParameters p;
  p.n = Eigen::Map<const Eigen::VectorXd>(grid.n.data(), K);
  p.k_s = Eigen::Map<const Eigen::VectorXd>(grid.k_s.data(), K);
  p.psi_f = Eigen::Map<const Eigen::VectorXd>(grid.psi_f.data(), K);
  p.eta = Eigen::Map<const Eigen::VectorXd>(grid.moisture_deficit.data(), K);
  p.rain_scale = Eigen::VectorXd::Ones(K);
  return p;
}

ThetaVector ModelParameters::theta(double rain_rate) const {
  const int K = cells();
  ThetaVector t;
  t.cells = K;
  t.values.resize(5 * K);
  t.block(ThetaKind::rain) = rain_scale * rain_rate;
  t.block(ThetaKind::roughness) = n;
  t.block(ThetaKind::k_s) = k_s;
  t.block(ThetaKind::psi_f) = psi_f;
  t.block(ThetaKind::eta) = eta;
  return t;
}

}  // namespace hydrodae
