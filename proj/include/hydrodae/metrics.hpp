#pragma once

#include <vector>

namespace hydrodae {

struct PeakErrors {
  double e_q_peak = 0.0;
  double e_t_peak = 0.0;
};

struct HydrographMetrics {
  double e_q_peak = 0.0;
  double e_t_peak = 0.0;
  double rmse_q = 0.0;
  double eps_q = 1e-9;  // m^3/s
  double eps_t = 1.0;   // s
};

/// Index of the first maximum.
int peak_index(const std::vector<double>& q);

/// Relative peak-flow and time-to-peak errors. Times to peak are measured
/// from the first sample of `time_s`. Throws std::invalid_argument on empty
/// or mismatched series.
PeakErrors peak_errors(const std::vector<double>& q_test, const std::vector<double>& q_ref,
                       const std::vector<double>& time_s, double eps_q = 1e-9, double eps_t = 1.0);

double discharge_rmse(const std::vector<double>& q_test, const std::vector<double>& q_ref);

HydrographMetrics compare_hydrographs(const std::vector<double>& q_test, const std::vector<double>& q_ref,
                                      const std::vector<double>& time_s, double eps_q = 1e-9, double eps_t = 1.0);

}  // namespace hydrodae
