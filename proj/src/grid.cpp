#include "hydrodae/grid.hpp"

#include <cmath>
#include <string>

#include "hydrodae/errors.hpp"
#include "hydrodae/measurement.hpp"

namespace hydrodae {

std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::left: return "L";
    case Direction::right: return "R";
    case Direction::up: return "U";
    case Direction::down: return "D";
  }
  return "?";
}

int CellGrid::cell_at(int r, int c) const noexcept {
  if (r < 0 || r >= ny || c < 0 || c >= nx) return -1;
  return cell_of_raster[static_cast<std::size_t>(r) * nx + c];
}

void CellGrid::validate() const {
  if (nx < 1 || ny < 1) throw ConfigError("grid dimensions must be at least 1x1");
  if (!(dx > 0) || !(dy > 0)) throw ConfigError("cell size must be positive");
  const int K = num_cells();
  if (K == 0) throw ConfigError("grid has no active cells");
  for (int c = 0; c < K; ++c) {
    const std::string at = " at cell " + std::to_string(c);
    if (!std::isfinite(z[c])) throw ConfigError("non-finite elevation" + at);
    if (!(n[c] > 0)) throw ConfigError("roughness must be > 0" + at);
    if (!(k_s[c] > 0)) throw ConfigError("K_s must be > 0" + at);
    if (!(psi_f[c] >= 0)) throw ConfigError("psi_f must be >= 0" + at);
    if (!(theta_i[c] >= 0 && theta_i[c] <= theta_s[c] && theta_s[c] <= 1))
      throw ConfigError("need 0 <= theta_i <= theta_s <= 1" + at);
  }
  if (!(outlet_slope >= 0)) throw ConfigError("outlet slope must be >= 0");
}

CellGrid make_grid(const GridFields& f) {
  if (f.nx < 1 || f.ny < 1) throw ConfigError("grid dimensions must be at least 1x1");
  if (!(f.dx > 0) || !(f.dy > 0)) throw ConfigError("cell size must be positive");
  const std::size_t N = static_cast<std::size_t>(f.nx) * f.ny;
  auto check = [&](const std::vector<double>& v, const char* name) {
    if (v.size() != N)
      throw ConfigError(std::string("field '") + name + "' has " + std::to_string(v.size()) +
                        " values, expected " + std::to_string(N));
  };
  check(f.z, "z");
  check(f.n, "n");
  check(f.k_s, "k_s");
  check(f.psi_f, "psi_f");
  check(f.theta_s, "theta_s");
  check(f.theta_i, "theta_i");
  if (!f.active.empty() && f.active.size() != N) throw ConfigError("active mask has wrong size");

  CellGrid g;
  g.nx = f.nx;
  g.ny = f.ny;
  g.dx = f.dx;
  g.dy = f.dy;
  g.outlet_slope = f.outlet_slope;
  g.cell_of_raster.assign(N, -1);
  for (std::size_t i = 0; i < N; ++i) {
    if (!f.active.empty() && !f.active[i]) continue;
    g.cell_of_raster[i] = static_cast<int>(g.raster_of_cell.size());
    g.raster_of_cell.push_back(static_cast<int>(i));
    g.z.push_back(f.z[i]);
    g.n.push_back(f.n[i]);
    g.k_s.push_back(f.k_s[i]);
    g.psi_f.push_back(f.psi_f[i]);
    g.theta_s.push_back(f.theta_s[i]);
    g.theta_i.push_back(f.theta_i[i]);
    g.moisture_deficit.push_back(f.theta_s[i] - f.theta_i[i]);
  }
  g.outlet_flag.assign(g.raster_of_cell.size(), 0);
  for (auto [r, c] : f.outlets) {
    const int cell = g.cell_at(r, c);
    if (cell < 0) throw ConfigError("outlet (" + std::to_string(r) + "," + std::to_string(c) + ") is not an active cell");
    bool open = false;
    for (Direction d : kDirections)
      if (g.cell_at(r + row_offset(d), c + col_offset(d)) < 0) open = true;
    if (!open)
      throw ConfigError("outlet (" + std::to_string(r) + "," + std::to_string(c) + ") has no boundary face");
    if (!g.outlet_flag[cell]) g.outlet_cells.push_back(cell);
    g.outlet_flag[cell] = 1;
  }
  g.validate();
  return g;
}

namespace {

int divide_exact(double length, double cell, const char* what) {
  const double ratio = length / cell;
  const double rounded = std::round(ratio);
  if (rounded < 1 || std::abs(ratio - rounded) > 1e-9 * ratio)
    throw ConfigError("cell size " + std::to_string(cell) + " m does not divide the " + what + " (" +
                      std::to_string(length) + " m)");
  return static_cast<int>(rounded);
}

}  // namespace

GridFields vtilted_fields(const VTiltedParams& p) {
  if (!(p.cell_size > 0)) throw ConfigError("cell size must be positive");
  const int nh = divide_exact(p.hillslope_width, p.cell_size, "hillslope width");
  const int nc = divide_exact(p.channel_width, p.cell_size, "channel width");
  const int ny = divide_exact(p.length, p.cell_size, "domain length");
  const int nx = 2 * nh + nc;
  divide_exact(2 * p.hillslope_width + p.channel_width, p.cell_size, "domain width");

  GridFields f;
  f.nx = nx;
  f.ny = ny;
  f.dx = p.cell_size;
  f.dy = p.cell_size;
  const std::size_t N = static_cast<std::size_t>(nx) * ny;
  f.z.resize(N);
  f.n.resize(N);
  f.k_s.assign(N, p.k_s);
  f.psi_f.assign(N, p.psi_f);
  f.theta_s.assign(N, p.theta_s);
  f.theta_i.assign(N, p.theta_i);
  for (int r = 0; r < ny; ++r) {
    const double along = p.slope_y * (ny - 1 - r) * f.dy;
    for (int c = 0; c < nx; ++c) {
      int across = 0;
      if (c < nh) across = nh - c;
      else if (c >= nh + nc) across = c - (nh + nc) + 1;
      const std::size_t i = static_cast<std::size_t>(r) * nx + c;
      f.z[i] = p.slope_x * across * f.dx + along;
      f.n[i] = across == 0 ? p.channel_n : p.hillslope_n;
    }
  }
  for (int c = nh; c < nh + nc; ++c) f.outlets.emplace_back(ny - 1, c);
  f.outlet_slope = p.outlet_slope;
  return f;
}

CellGrid build_vtilted(const VTiltedParams& params) { return make_grid(vtilted_fields(params)); }

RoutingOperators build_routing_operators(const CellGrid& g) {
  const int K = g.num_cells();
  RoutingOperators ops;
  for (Direction d : kDirections) {
    const int di = index_of(d);
    ops.neighbor[di].assign(K, -1);
    ops.face[di].assign(K, FaceKind::closed);
    std::vector<Eigen::Triplet<double>> trips;
    for (int c = 0; c < K; ++c) {
      const int nb = g.cell_at(g.row(c) + row_offset(d), g.col(c) + col_offset(d));
      if (nb >= 0) {
        ops.neighbor[di][c] = nb;
        ops.face[di][c] = FaceKind::neighbor;
        trips.emplace_back(c, nb, 1.0);
      } else if (g.is_outlet(c)) {
        ops.face[di][c] = FaceKind::free_drainage;
      }
    }
    ops.B[di].resize(K, K);
    ops.B[di].setFromTriplets(trips.begin(), trips.end());
  }
  return ops;
}

MeasurementMap build_measurement_matrix(const std::vector<Gauge>& gauges, const CellGrid& grid) {
  const int K = grid.num_cells();
  const StateLayout layout{K};
  MeasurementMap m;
  std::vector<Eigen::Triplet<double>> trips;
  for (const Gauge& gauge : gauges) {
    if (gauge.cell < 0 || gauge.cell >= K)
      throw ConfigError("gauge cell " + std::to_string(gauge.cell) + " is outside the domain (K=" +
                        std::to_string(K) + ")");
    for (const Gauge& seen : m.gauges)
      if (seen == gauge)
        throw ConfigError("duplicate gauge (cell " + std::to_string(gauge.cell) + ", " +
                          std::string(to_string(gauge.kind)) + ")");
    const int row = m.rows();
    m.gauges.push_back(gauge);
    m.state_index.push_back(layout.index(gauge.kind, gauge.cell));
    trips.emplace_back(row, m.state_index.back(), 1.0);
  }
  m.C.resize(m.rows(), layout.size());
  m.C.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace hydrodae
