#include "hydrodae/ascii_grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hydrodae/errors.hpp"

namespace hydrodae {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw IoError(source + ":" + std::to_string(line) + ": " + what);
}

bool parse_number(const std::string& token, double& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::vector<std::uint8_t> AsciiGrid::active_mask() const {
  std::vector<std::uint8_t> mask(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mask[i] = is_nodata(i) ? 0 : 1;
  return mask;
}

AsciiGrid parse_ascii_grid(std::istream& in, const std::string& source) {
  AsciiGrid g;
  bool have_ncols = false, have_nrows = false, have_x = false, have_y = false, have_cs = false;
  std::string line;
  int lineno = 0;
  std::streampos data_start;

  // Header: keyword/value pairs until the first line starting with a number.
  while (true) {
    data_start = in.tellg();
    if (!std::getline(in, line)) fail(source, lineno + 1, "unexpected end of file in header");
    ++lineno;
    if (is_blank(line)) continue;
    std::istringstream ls(line);
    std::string key, value, extra;
    ls >> key;
    double probe;
    if (parse_number(key, probe)) {
      --lineno;
      in.clear();
      in.seekg(data_start);
      break;
    }
    if (!(ls >> value) || (ls >> extra)) fail(source, lineno, "malformed header line '" + line + "'");
    double v;
    if (!parse_number(value, v)) fail(source, lineno, "non-numeric header value '" + value + "'");
    const std::string k = lower(key);
    if (k == "ncols") {
      g.ncols = static_cast<int>(v);
      have_ncols = v >= 1 && v == static_cast<double>(g.ncols);
      if (!have_ncols) fail(source, lineno, "ncols must be a positive integer");
    } else if (k == "nrows") {
      g.nrows = static_cast<int>(v);
      have_nrows = v >= 1 && v == static_cast<double>(g.nrows);
      if (!have_nrows) fail(source, lineno, "nrows must be a positive integer");
    } else if (k == "xllcorner" || k == "xllcenter") {
      g.xllcorner = v;
      have_x = true;
    } else if (k == "yllcorner" || k == "yllcenter") {
      g.yllcorner = v;
      have_y = true;
    } else if (k == "cellsize") {
      if (!(v > 0)) fail(source, lineno, "cellsize must be positive");
      g.cellsize = v;
      have_cs = true;
    } else if (k == "nodata_value") {
      g.nodata = v;
    } else {
      fail(source, lineno, "unknown header keyword '" + key + "'");
    }
  }
  if (!(have_ncols && have_nrows && have_x && have_y && have_cs))
    fail(source, lineno + 1, "incomplete header (need ncols, nrows, xllcorner, yllcorner, cellsize)");

  g.values.reserve(static_cast<std::size_t>(g.ncols) * g.nrows);
  int row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    if (row == g.nrows) fail(source, lineno, "more than nrows=" + std::to_string(g.nrows) + " data rows");
    std::istringstream ls(line);
    std::string token;
    int count = 0;
    while (ls >> token) {
      double v;
      if (!parse_number(token, v))
        fail(source, lineno, "row " + std::to_string(row) + ": non-numeric value '" + token + "'");
      if (count < g.ncols) g.values.push_back(v);
      ++count;
    }
    if (count != g.ncols)
      fail(source, lineno,
           "row " + std::to_string(row) + " has " + std::to_string(count) + " values, expected ncols=" +
               std::to_string(g.ncols));
    ++row;
  }
  if (row != g.nrows)
    fail(source, lineno, "found " + std::to_string(row) + " data rows, expected nrows=" + std::to_string(g.nrows));
  return g;
}

AsciiGrid read_ascii_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_ascii_grid(in, path.string());
}

AsciiGrid load_ascii_grid(const std::filesystem::path& path, int nx, int ny) {
  AsciiGrid g = read_ascii_grid(path);
  if (g.ncols != nx || g.nrows != ny)
    throw IoError(path.string() + ":1: raster is " + std::to_string(g.ncols) + "x" + std::to_string(g.nrows) +
                  ", expected " + std::to_string(nx) + "x" + std::to_string(ny));
  return g;
}

void write_ascii_grid(std::ostream& out, const AsciiGrid& g) {
  char buf[64];
  auto num = [&](double v) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
  };
  out << "ncols " << g.ncols << '\n'
      << "nrows " << g.nrows << '\n'
      << "xllcorner " << num(g.xllcorner) << '\n'
      << "yllcorner " << num(g.yllcorner) << '\n'
      << "cellsize " << num(g.cellsize) << '\n'
      << "NODATA_value " << num(g.nodata) << '\n';
  for (int r = 0; r < g.nrows; ++r) {
    for (int c = 0; c < g.ncols; ++c) {
      if (c) out << ' ';
      out << num(g.values[static_cast<std::size_t>(r) * g.ncols + c]);
    }
    out << '\n';
  }
}

void write_ascii_grid(const std::filesystem::path& path, const AsciiGrid& grid) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_ascii_grid(out, grid);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace hydrodae
