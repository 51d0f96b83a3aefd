#include <doctest.h>

#include <cstdlib>
#include <set>
#include <sstream>

#include "adasearch/error.hpp"
#include "adasearch/planner.hpp"

using namespace adasearch;

namespace {

GridSpec grid(std::size_t rows, std::size_t cols) {
  GridSpec g;
  g.rows = rows;
  g.cols = cols;
  g.cell_size = 4.0;
  return g;
}

}  // namespace

TEST_CASE("raster path shapes") {
  CHECK(raster_path(grid(1, 1)).configs.size() == 1);

  const GridSpec g = grid(2, 2);
  const auto p = raster_path(g).configs;
  REQUIRE(p.size() == 4);
  CHECK(p[0].cell_index == g.index(0, 0));
  CHECK(p[1].cell_index == g.index(0, 1));
  CHECK(p[2].cell_index == g.index(1, 1));
  CHECK(p[3].cell_index == g.index(1, 0));
  for (const auto& z : p) CHECK(z.position.z() == doctest::Approx(g.sensor_altitude));
}

TEST_CASE("serpentine visits every cell once through adjacent steps") {
  for (auto [r, c] : {std::pair{6, 6}, std::pair{3, 5}, std::pair{16, 16}, std::pair{1, 7}}) {
    const GridSpec g = grid(r, c);
    const auto p = raster_path(g).configs;
    REQUIRE(p.size() == g.size());
    std::set<CellIndex> seen;
    for (const auto& z : p) seen.insert(z.cell_index);
    CHECK(seen.size() == g.size());
    for (std::size_t i = 1; i < p.size(); ++i) {
      const auto a = p[i - 1].cell_index, b = p[i].cell_index;
      const long dr = std::labs(static_cast<long>(g.row_of(a)) - static_cast<long>(g.row_of(b)));
      const long dc = std::labs(static_cast<long>(g.col_of(a)) - static_cast<long>(g.col_of(b)));
      CHECK(dr + dc == 1);
    }
  }
}

TEST_CASE("dwell schedule totals") {
  const RasterPath p = raster_path(grid(2, 2));
  auto s = round_schedule(p, {0, 3}, 1.0, 2.0, 1);
  CHECK(s.total_time == doctest::Approx(6.0));
  CHECK(s.sample_time == doctest::Approx(4.0));
  CHECK(s.naive_time == doctest::Approx(8.0));
  CHECK(s.round == 1);

  s = round_schedule(p, {0, 1, 2, 3}, 1.0, 4.0);
  CHECK(s.total_time == doctest::Approx(16.0));
  CHECK(s.total_time == s.naive_time);

  s = round_schedule(p, {}, 1.0, 8.0);
  CHECK(s.total_time == doctest::Approx(4.0));
  for (double d : s.dwell) CHECK(d == 1.0);

  CHECK_THROWS_AS(round_schedule(p, {}, 1.0, 0.5), Error);
  CHECK_THROWS_AS(round_schedule(p, {9}, 1.0, 2.0), Error);
}

TEST_CASE("adaptive round time never exceeds the uniform one") {
  const RasterPath p = raster_path(grid(3, 3));
  for (unsigned mask = 0; mask < 512; mask += 37) {
    CellSet s;
    for (CellIndex x = 0; x < 9; ++x) {
      if (mask & (1u << x)) s.push_back(x);
    }
    const auto sch = round_schedule(p, s, 1.0, 4.0);
    CHECK(sch.total_time <= sch.naive_time);
    CHECK((sch.total_time == sch.naive_time) == (s.size() == 9));
    CHECK(sch.total_time == doctest::Approx(4.0 * s.size() + 1.0 * (9 - s.size())));
  }
}

TEST_CASE("path CSV") {
  const RasterPath p = raster_path(grid(1, 2));
  const auto s = round_schedule(p, {1}, 1.0, 2.0);
  std::ostringstream out;
  write_path_csv(out, p, &s);
  CHECK(out.str() == "step,x,y,z,dwell\n0,2,2,2,1\n1,6,2,2,2\n");
}
