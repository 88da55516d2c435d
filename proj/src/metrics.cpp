#include "hydrodae/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hydrodae {

int peak_index(const std::vector<double>& q) {
  if (q.empty()) throw std::invalid_argument("empty discharge series");
  return static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
}

PeakErrors peak_errors(const std::vector<double>& q_test, const std::vector<double>& q_ref,
                       const std::vector<double>& time_s, double eps_q, double eps_t) {
  if (q_test.empty() || q_ref.empty()) throw std::invalid_argument("empty discharge series");
  if (q_test.size() != q_ref.size() || time_s.size() != q_ref.size())
    throw std::invalid_argument("series must share one time grid");
  if (!(eps_q > 0) || !(eps_t > 0)) throw std::invalid_argument("metric floors must be > 0");
  const int it = peak_index(q_test), ir = peak_index(q_ref);
  const double tt = time_s[it] - time_s.front();
  const double tr = time_s[ir] - time_s.front();
  PeakErrors e;
  e.e_q_peak = std::abs(q_test[it] - q_ref[ir]) / std::max(std::abs(q_ref[ir]), eps_q);
  e.e_t_peak = std::abs(tt - tr) / std::max(std::abs(tr), eps_t);
  return e;
}

double discharge_rmse(const std::vector<double>& q_test, const std::vector<double>& q_ref) {
  if (q_test.size() != q_ref.size()) throw std::invalid_argument("series lengths differ");
  if (q_test.empty()) throw std::invalid_argument("empty discharge series");
  double s = 0.0;
  for (std::size_t i = 0; i < q_test.size(); ++i) s += (q_test[i] - q_ref[i]) * (q_test[i] - q_ref[i]);
  return std::sqrt(s / static_cast<double>(q_test.size()));
}

HydrographMetrics compare_hydrographs(const std::vector<double>& q_test, const std::vector<double>& q_ref,
                                      const std::vector<double>& time_s, double eps_q, double eps_t) {
  const PeakErrors p = peak_errors(q_test, q_ref, time_s, eps_q, eps_t);
  return {p.e_q_peak, p.e_t_peak, discharge_rmse(q_test, q_ref), eps_q, eps_t};
}

}  // namespace hydrodae
