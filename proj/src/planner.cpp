#include "adasearch/planner.hpp"

#include <cmath>
#include <ostream>

#include "adasearch/error.hpp"

namespace adasearch {

RasterPath raster_path(const GridSpec& grid) {
  grid.validate();
  RasterPath path;
  path.configs.reserve(grid.size());
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t j = 0; j < grid.cols; ++j) {
      const std::size_t c = (r % 2 == 0) ? j : grid.cols - 1 - j;
      path.configs.push_back(config_above(grid, grid.index(r, c)));
    }
  }
  return path;
}

DwellSchedule round_schedule(const RasterPath& path, const CellSet& candidates, double tau_0,
                             double tau_i, int round) {
  require(std::isfinite(tau_0) && tau_0 > 0, ErrorCode::kInvalidArgument, "tau_0 must be > 0");
  require(std::isfinite(tau_i) && tau_i >= tau_0, ErrorCode::kInvalidArgument,
          "tau_i must be >= tau_0");
  const std::size_t n = path.configs.size();
  std::vector<bool> active(n, false);
  for (CellIndex x : candidates) {
    require(x < n, ErrorCode::kInvalidArgument, "candidate outside the grid");
    active[x] = true;
  }
  DwellSchedule s;
  s.round = round;
  s.dwell.reserve(n);
  for (const auto& z : path.configs) {
    const bool hot = active[z.cell_index];
    s.dwell.push_back(hot ? tau_i : tau_0);
    s.total_time += s.dwell.back();
    if (hot) s.sample_time += tau_i;
  }
  s.naive_time = tau_i * static_cast<double>(n);
  return s;
}

void write_path_csv(std::ostream& out, const RasterPath& path, const DwellSchedule* schedule) {
  out.precision(17);
  out << (schedule ? "step,x,y,z,dwell\n" : "step,x,y,z\n");
  for (std::size_t i = 0; i < path.configs.size(); ++i) {
    const auto& p = path.configs[i].position;
    out << i << ',' << p.x() << ',' << p.y() << ',' << p.z();
    if (schedule) out << ',' << schedule->dwell.at(i);
    out << '\n';
  }
}

}  // namespace adasearch
