#pragma once

#include <iosfwd>
#include <vector>

#include "adasearch/env.hpp"
#include "adasearch/sensing.hpp"

namespace adasearch {

/// Serpentine sweep: row 0 left to right, row 1 right to left, and so on.
struct RasterPath {
  std::vector<SensingConfig> configs;
};

RasterPath raster_path(const GridSpec& grid);

struct DwellSchedule {
  std::vector<double> dwell;  // aligned with the path
  int round = 0;
  double total_time = 0.0;
  double sample_time = 0.0;  // time spent over candidates only
  double naive_time = 0.0;   // tau_i * |S|
};

/// tau_i over configs above the candidates, tau_0 elsewhere.
DwellSchedule round_schedule(const RasterPath& path, const CellSet& candidates, double tau_0,
                             double tau_i, int round = 0);

/// step,x,y,z,dwell. Dwell column is omitted when schedule is null.
void write_path_csv(std::ostream& out, const RasterPath& path,
                    const DwellSchedule* schedule = nullptr);

}  // namespace adasearch
