#pragma once

#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "adasearch/env.hpp"
#include "adasearch/rng.hpp"

namespace adasearch {

/// A sensor pose. The pointwise model reads cell_index, the physical model
/// reads position.
struct SensingConfig {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  CellIndex cell_index = 0;
};

/// Sensing configuration directly above cell x.
SensingConfig config_above(const GridSpec& grid, CellIndex x);

struct Pointwise {};

struct InverseSquare {
  double c = 1.0;
};

using SensitivityModel = std::variant<Pointwise, InverseSquare>;

bool is_pointwise(const SensitivityModel& model);

struct MeasurementRecord {
  SensingConfig config;
  double duration = 0.0;
  std::uint64_t count = 0;
  int round = 0;
  double time_stamp = 0.0;
};

/// h(x, z). Emitters sit on the ground plane (altitude 0).
double sensitivity(const SensitivityModel& model, const GridSpec& grid, CellIndex x,
                   const SensingConfig& z);

/// h(., z) for every cell.
Eigen::VectorXd sensitivity_column(const SensitivityModel& model, const GridSpec& grid,
                                   const SensingConfig& z);

/// Sum over cells of h(x, z) mu(x).
double aggregate_rate(const EnvironmentMap& env, const SensitivityModel& model,
                      const SensingConfig& z);

MeasurementRecord observe(Rng& rng, const EnvironmentMap& env, const SensitivityModel& model,
                          const SensingConfig& z, double duration, int round = 0,
                          double time_stamp = 0.0);

struct SensitivityMatrix {
  Eigen::MatrixXd h;  // |S| x |configs|
  Eigen::Index rank = 0;
  double condition_number = 0.0;  // of H H^T; infinite when rank-deficient
  bool rank_deficient() const { return rank < h.rows(); }
};

SensitivityMatrix sensitivity_matrix(const GridSpec& grid,
                                     const std::vector<SensingConfig>& configs,
                                     const SensitivityModel& model);

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& h);

}  // namespace adasearch
