#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "hydrodae/errors.hpp"
#include "hydrodae/report.hpp"

using namespace hydrodae;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hydrodae_report_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("metrics_report") {

TEST_CASE("doubles round-trip through text") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 100; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.0) == "0");
}

TEST_CASE("covariance dump round-trip") {
  Eigen::MatrixXd K(3, 3);
  K << 1, 2, 3, 2, 5, 6, 3, 6, 9.5;
  K(0, 2) = 3.000000000000001;
  const fs::path p = scratch("cov.bin");
  write_covariance_dump(p, K);
  CHECK(fs::file_size(p) == 8 + 8 + 9 * 8);
  const Eigen::MatrixXd back = read_covariance_dump(p);
  CHECK((back.array() == K.array()).all());
  write_text_file(p, "not a dump");
  CHECK_THROWS_AS(read_covariance_dump(p), IoError);
}

TEST_CASE("hydrograph csv columns") {
  SimulationResult r;
  r.time_s = {0, 10};
  r.outlet_q = {0, 0.5};
  r.storage_m3 = {0, 1};
  r.infil_m3 = {0, 0.25};
  r.rain_m3 = {0, 2};
  const std::string csv = hydrograph_csv(r);
  CHECK(csv == "t_s,Q_outlet_m3s,storage_m3,infil_m3,rain_m3\n0,0,0,0,0\n10,0.5,1,0.25,2\n");
}

TEST_CASE("report json carries a schema version") {
  Report rep;
  rep.command = "simulate";
  RunSummary s;
  s.name = "nominal";
  s.engine = "dae";
  s.ledger.rain = 2.0;
  rep.runs.push_back(s);
  rep.metrics = HydrographMetrics{0.1, 0.0, 0.2};
  const nlohmann::json j = report_to_json(rep);
  CHECK(j["schema"] == 1);
  CHECK(j["runs"][0]["mass_ledger"]["rain_m3"] == 2.0);
  CHECK(j["metrics"]["e_Q_peak"] == 0.1);
  CHECK(j["fit"].is_null());
  const fs::path p = scratch("report.json");
  export_report(p, rep);
  CHECK(nlohmann::json::parse(slurp(p)) == j);
  CHECK_THROWS_AS(export_report(scratch("missing_dir") / "x" / "r.json", rep), IoError);
}

TEST_CASE("interval csv") {
  const CellGrid g = make_grid(testing::plane_fields(2, 1));
  CovarianceRun run;
  run.steps = {0, 1};
  run.variances = {Eigen::VectorXd::Zero(12), Eigen::VectorXd::Constant(12, 0.01)};
  std::vector<Eigen::VectorXd> states = {Eigen::VectorXd::Zero(12), Eigen::VectorXd::Constant(12, 1.0)};
  const fs::path p = scratch("intervals.csv");
  write_interval_csv(p, run, states, 5.0, StateLayout{2}, Family::gaussian, 0.95);
  const std::string text = slurp(p);
  CHECK(text.rfind("k,t_s,state_kind,cell,nominal,sigma,lo95,hi95\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 24);
  CHECK(text.find("\n1,5,h,0,1,0.1,") != std::string::npos);
}

TEST_CASE("fields map back onto the raster") {
  GridFields f = testing::plane_fields(3, 2);
  f.active = {1, 0, 1, 1, 1, 1};
  const CellGrid g = make_grid(f);
  const AsciiGrid a = field_to_ascii(g, Eigen::VectorXd::LinSpaced(5, 1.0, 5.0));
  CHECK(a.values == std::vector<double>{1, -9999, 2, 3, 4, 5});
  CHECK(a.nodata == -9999);
}

TEST_CASE("ensemble csv") {
  EnsembleStats st;
  st.n_samples = 2;
  st.outlet_q = Eigen::MatrixXd::Zero(2, 2);
  st.outlet_q(1, 1) = 0.25;
  CHECK(ensemble_csv(st, 10.0) == "t_s,sample_0,sample_1\n0,0,0\n10,0,0.25\n");
}

}
