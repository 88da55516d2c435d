#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hydrodae/metrics.hpp"

using namespace hydrodae;

TEST_SUITE("metrics_report") {

TEST_CASE("identical series") {
  const std::vector<double> t{0, 10, 20, 30}, q{0, 2, 5, 1};
  const PeakErrors e = peak_errors(q, q, t);
  CHECK(e.e_q_peak == 0.0);
  CHECK(e.e_t_peak == 0.0);
  CHECK(discharge_rmse(q, q) == 0.0);
}

TEST_CASE("peak of 11 against 10 at the same time") {
  const std::vector<double> t{0, 60, 120}, a{0, 11, 3}, b{0, 10, 4};
  const PeakErrors e = peak_errors(a, b, t);
  CHECK(e.e_q_peak == doctest::Approx(0.10));
  CHECK(e.e_t_peak == 0.0);
}

TEST_CASE("time-to-peak is measured from the first sample") {
  const std::vector<double> t{100, 110, 120, 130, 140}, a{0, 0, 0, 0, 1}, b{0, 1, 0, 0, 0};
  // 40 s against 10 s.
  CHECK(peak_errors(a, b, t).e_t_peak == doctest::Approx(3.0));
}

TEST_CASE("all-zero reference engages the floor") {
  const std::vector<double> t{0, 1, 2}, a{0, 1e-3, 0}, z{0, 0, 0};
  const PeakErrors e = peak_errors(a, z, t, 1e-6, 1.0);
  CHECK(std::isfinite(e.e_q_peak));
  CHECK(e.e_q_peak == doctest::Approx(1e3));
  CHECK(std::isfinite(e.e_t_peak));
}

TEST_CASE("first maximum wins ties") { CHECK(peak_index({1, 3, 3, 2}) == 1); }

TEST_CASE("rmse") {
  std::vector<double> a(17), b(17);
  for (int i = 0; i < 17; ++i) {
    a[i] = 0.5 * i;
    b[i] = a[i] + 0.2;
  }
  CHECK(discharge_rmse(a, b) == doctest::Approx(0.2));
  CHECK(discharge_rmse({3}, {7}) == 4.0);
  const HydrographMetrics m = compare_hydrographs(b, a, std::vector<double>(17, 0.0));
  CHECK(m.rmse_q == doctest::Approx(0.2));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(peak_errors({}, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(discharge_rmse({1, 2}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(peak_errors({1, 2}, {1, 2}, {0}), std::invalid_argument);
}

}
