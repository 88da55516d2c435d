#include "hydrodae/report.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hydrodae/errors.hpp"

namespace hydrodae {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

RunSummary summarize_run(const std::string& name, Engine engine, const SimulationResult& r, double dt) {
  RunSummary s;
  s.name = name;
  s.engine = std::string(to_string(engine));
  s.runtime_s = r.runtime_s;
  s.steps = r.steps();
  s.dt = dt;
  const int p = r.peak_step();
  s.peak_q = p >= 0 ? r.outlet_q[p] : 0.0;
  s.t_peak_s = p >= 0 ? r.time_s[p] : 0.0;
  for (int it : r.newton_iterations) s.max_iterations = std::max(s.max_iterations, it);
  s.ledger = r.ledger;
  return s;
}

namespace {

nlohmann::json ledger_json(const MassLedger& l) {
  return {{"rain_m3", l.rain},
          {"infiltration_m3", l.infiltration},
          {"outflow_m3", l.outflow},
          {"storage_initial_m3", l.storage_initial},
          {"storage_final_m3", l.storage_final},
          {"projection_m3", l.projection},
          {"closure_error", l.closure_error()}};
}

}  // namespace

nlohmann::json fit_to_json(const LogLogFit& f) {
  return {{"a", f.a}, {"b", f.b}, {"r2", f.r2}, {"n_pairs", f.n_pairs}};
}

nlohmann::json report_to_json(const Report& report) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["command"] = report.command;
  j["runs"] = nlohmann::json::array();
  for (const RunSummary& r : report.runs) {
    j["runs"].push_back({{"name", r.name},
                         {"engine", r.engine},
                         {"runtime_s", r.runtime_s},
                         {"steps", r.steps},
                         {"dt_s", r.dt},
                         {"peak_q_m3s", r.peak_q},
                         {"t_peak_s", r.t_peak_s},
                         {"max_iterations_per_step", r.max_iterations},
                         {"mass_ledger", ledger_json(r.ledger)}});
  }
  if (report.metrics) {
    const HydrographMetrics& m = *report.metrics;
    j["metrics"] = {{"e_Q_peak", m.e_q_peak}, {"e_t_peak", m.e_t_peak}, {"rmse_Q_m3s", m.rmse_q},
                    {"eps_Q_m3s", m.eps_q},   {"eps_t_s", m.eps_t}};
  } else {
    j["metrics"] = nullptr;
  }
  j["fit"] = report.fit ? fit_to_json(*report.fit) : nlohmann::json(nullptr);
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

void export_report(const std::filesystem::path& path, const Report& report) {
  write_text_file(path, report_to_json(report).dump(2) + "\n");
}

std::string hydrograph_csv(const SimulationResult& r) {
  std::ostringstream os;
  os << "t_s,Q_outlet_m3s,storage_m3,infil_m3,rain_m3\n";
  for (std::size_t k = 0; k < r.time_s.size(); ++k)
    os << format_double(r.time_s[k]) << ',' << format_double(r.outlet_q[k]) << ',' << format_double(r.storage_m3[k])
       << ',' << format_double(r.infil_m3[k]) << ',' << format_double(r.rain_m3[k]) << '\n';
  return os.str();
}

void write_interval_csv(const std::filesystem::path& path, const CovarianceRun& run,
                        const std::vector<Eigen::VectorXd>& states, double dt, const StateLayout& layout,
                        Family family, double level) {
  if (states.size() != run.steps.size()) throw NumericalError("interval export: state/variance count mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "k,t_s,state_kind,cell,nominal,sigma,lo95,hi95\n";
  std::string line;
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const int k = run.steps[i];
    const std::string head = std::to_string(k) + ',' + format_double(k * dt) + ',';
    for (int j = 0; j < layout.size(); ++j) {
      const double x0 = states[i][j];
      const double var = std::max(run.variances[i][j], 0.0);
      const Interval iv = confidence_interval(x0, var, family, level, true);
      line = head;
      line += to_string(layout.kind_of(j));
      line += ',' + std::to_string(layout.cell_of(j)) + ',' + format_double(x0) + ',' + format_double(std::sqrt(var)) +
              ',' + format_double(iv.lo) + ',' + format_double(iv.hi) + '\n';
      out << line;
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {
constexpr char kCovMagic[8] = {'H', 'D', 'C', 'O', 'V', 0, 0, 1};
}

void write_covariance_dump(const std::filesystem::path& path, const Eigen::MatrixXd& K) {
  if (K.rows() != K.cols()) throw NumericalError("covariance dump needs a square matrix");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const std::int64_t n = K.rows();
  out.write(kCovMagic, 8);
  out.write(reinterpret_cast<const char*>(&n), 8);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = K;
  out.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * n * n));
  if (!out) throw IoError("write failed for " + path.string());
}

Eigen::MatrixXd read_covariance_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  std::int64_t n = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&n), 8);
  if (!in || std::memcmp(magic, kCovMagic, 8) != 0 || n < 0) throw IoError(path.string() + ": not a covariance dump");
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(n, n);
  in.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * n * n));
  if (!in) throw IoError(path.string() + ": truncated covariance dump");
  return rm;
}

std::string ensemble_csv(const EnsembleStats& st, double dt) {
  std::ostringstream os;
  os << "t_s";
  for (int s = 0; s < st.n_samples; ++s) os << ",sample_" << s;
  os << '\n';
  for (Eigen::Index k = 0; k < st.outlet_q.rows(); ++k) {
    os << format_double(k * dt);
    for (int s = 0; s < st.n_samples; ++s) os << ',' << format_double(st.outlet_q(k, s));
    os << '\n';
  }
  return os.str();
}

AsciiGrid field_to_ascii(const CellGrid& grid, const Eigen::VectorXd& values, double nodata) {
  if (values.size() != grid.num_cells()) throw NumericalError("field size does not match the grid");
  AsciiGrid a;
  a.ncols = grid.nx;
  a.nrows = grid.ny;
  a.cellsize = grid.dx;
  a.nodata = nodata;
  a.values.assign(static_cast<std::size_t>(grid.nx) * grid.ny, nodata);
  for (int c = 0; c < grid.num_cells(); ++c) a.values[grid.raster_of_cell[c]] = values[c];
  return a;
}

}  // namespace hydrodae
