#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "hydrodae/ascii_grid.hpp"
#include "hydrodae/errors.hpp"

using namespace hydrodae;

TEST_SUITE("ascii_grid") {

TEST_CASE("2x2 grid of zeros") {
  std::istringstream in("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 10\nNODATA_value -9999\n0 0\n0 0\n");
  const AsciiGrid g = parse_ascii_grid(in);
  CHECK(g.ncols == 2);
  CHECK(g.nrows == 2);
  REQUIRE(g.values.size() == 4);
  for (double v : g.values) CHECK(v == 0.0);
}

TEST_CASE("short row names the row and line") {
  std::istringstream in("ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n1 2 3\n4 5\n");
  try {
    parse_ascii_grid(in, "dem.asc");
    FAIL("expected an error");
  } catch (const IoError& e) {
    const std::string what = e.what();
    CHECK(what.find("dem.asc:8") != std::string::npos);
    CHECK(what.find("row 1") != std::string::npos);
  }
}

TEST_CASE("malformed header") {
  std::istringstream missing("ncols 2\nnrows 2\ncellsize 1\n0 0\n0 0\n");
  CHECK_THROWS_AS(parse_ascii_grid(missing), IoError);
  std::istringstream garbage("ncols two\nnrows 2\n");
  CHECK_THROWS_AS(parse_ascii_grid(garbage), IoError);
  std::istringstream unknown("ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\nbogus 3\n1\n");
  CHECK_THROWS_AS(parse_ascii_grid(unknown), IoError);
  std::istringstream too_few_rows("ncols 1\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1\n");
  CHECK_THROWS_AS(parse_ascii_grid(too_few_rows), IoError);
}

TEST_CASE("NODATA cells are flagged inactive") {
  std::istringstream in("ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -1\n5 -1\n");
  const AsciiGrid g = parse_ascii_grid(in);
  const auto mask = g.active_mask();
  CHECK(mask[0] == 1);
  CHECK(mask[1] == 0);
}

TEST_CASE("write then read round-trips values") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  AsciiGrid g;
  g.ncols = 7;
  g.nrows = 5;
  g.xllcorner = 123.25;
  g.yllcorner = -4.5;
  g.cellsize = 2.5;
  for (int i = 0; i < 35; ++i) g.values.push_back(u(rng) * 1e-3 * (i + 1));
  const auto path = std::filesystem::temp_directory_path() / "hydrodae_roundtrip.asc";
  write_ascii_grid(path, g);
  const AsciiGrid r = load_ascii_grid(path, 7, 5);
  REQUIRE(r.values.size() == g.values.size());
  for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(std::abs(r.values[i] - g.values[i]) <= 1e-12);
  CHECK(r.xllcorner == g.xllcorner);
  CHECK(r.cellsize == g.cellsize);
  CHECK_THROWS_AS(load_ascii_grid(path, 5, 7), IoError);
  std::filesystem::remove(path);
}

}
