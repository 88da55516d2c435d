#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hydrodae {

/// ESRI ASCII raster. Values are row-major with row 0 at the top (north).
struct AsciiGrid {
  int ncols = 0;
  int nrows = 0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = 1.0;
  double nodata = -9999.0;
  std::vector<double> values;

  bool is_nodata(std::size_t i) const noexcept { return values[i] == nodata; }
  /// 1 for cells holding data, 0 for NODATA.
  std::vector<std::uint8_t> active_mask() const;
};

/// Throws IoError naming the line on malformed input. `source` labels
/// messages.
AsciiGrid parse_ascii_grid(std::istream& in, const std::string& source = "<stream>");
AsciiGrid read_ascii_grid(const std::filesystem::path& path);

/// Reads and checks the raster has exactly nx columns and ny rows.
AsciiGrid load_ascii_grid(const std::filesystem::path& path, int nx, int ny);

void write_ascii_grid(std::ostream& out, const AsciiGrid& grid);
void write_ascii_grid(const std::filesystem::path& path, const AsciiGrid& grid);

}  // namespace hydrodae
