#include "adasearch/sensing.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/SVD>

#include "adasearch/error.hpp"

namespace adasearch {

SensingConfig config_above(const GridSpec& grid, CellIndex x) {
  return {grid.sensing_position(x), x};
}

bool is_pointwise(const SensitivityModel& model) {
  return std::holds_alternative<Pointwise>(model);
}

namespace {

double inverse_square(double c, const Eigen::Vector3d& emitter, const Eigen::Vector3d& sensor) {
  const double d2 = (emitter - sensor).squaredNorm();
  require(d2 > 0.0, ErrorCode::kSingularGeometry, "sensor coincides with an emitter");
  return c / d2;
}

}  // namespace

double sensitivity(const SensitivityModel& model, const GridSpec& grid, CellIndex x,
                   const SensingConfig& z) {
  require(x < grid.size(), ErrorCode::kInvalidArgument, "cell index out of range");
  if (const auto* m = std::get_if<InverseSquare>(&model)) {
    require(m->c > 0, ErrorCode::kInvalidArgument, "inverse-square constant must be > 0");
    return inverse_square(m->c, grid.cell_center(x), z.position);
  }
  require(z.cell_index < grid.size(), ErrorCode::kInvalidArgument,
          "config cell index out of range");
  return z.cell_index == x ? 1.0 : 0.0;
}

Eigen::VectorXd sensitivity_column(const SensitivityModel& model, const GridSpec& grid,
                                   const SensingConfig& z) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
  if (const auto* m = std::get_if<InverseSquare>(&model)) {
    require(m->c > 0, ErrorCode::kInvalidArgument, "inverse-square constant must be > 0");
    for (Eigen::Index x = 0; x < n; ++x) {
      h[x] = inverse_square(m->c, grid.cell_center(static_cast<CellIndex>(x)), z.position);
    }
  } else {
    require(z.cell_index < grid.size(), ErrorCode::kInvalidArgument,
            "config cell index out of range");
    h[static_cast<Eigen::Index>(z.cell_index)] = 1.0;
  }
  return h;
}

double aggregate_rate(const EnvironmentMap& env, const SensitivityModel& model,
                      const SensingConfig& z) {
  return sensitivity_column(model, env.grid(), z).dot(env.mu());
}

MeasurementRecord observe(Rng& rng, const EnvironmentMap& env, const SensitivityModel& model,
                          const SensingConfig& z, double duration, int round,
                          double time_stamp) {
  require(std::isfinite(duration) && duration > 0, ErrorCode::kInvalidArgument,
          "duration must be > 0");
  const double rate = aggregate_rate(env, model, z);
  return {z, duration, sample_counts(rng, rate, duration), round, time_stamp};
}

SensitivityMatrix sensitivity_matrix(const GridSpec& grid,
                                     const std::vector<SensingConfig>& configs,
                                     const SensitivityModel& model) {
  require(!configs.empty(), ErrorCode::kInvalidArgument, "need at least one config");
  SensitivityMatrix out;
  out.h.resize(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(configs.size()));
  for (std::size_t j = 0; j < configs.size(); ++j) {
    out.h.col(static_cast<Eigen::Index>(j)) = sensitivity_column(model, grid, configs[j]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.h);
  const Eigen::VectorXd& s = svd.singularValues();
  const double tol = std::max(out.h.rows(), out.h.cols()) * s[0] *
                     std::numeric_limits<double>::epsilon();
  out.rank = (s.array() > tol).count();
  if (out.rank < out.h.rows()) {
    out.condition_number = std::numeric_limits<double>::infinity();
  } else {
    const double ratio = s[0] / s[out.h.rows() - 1];
    out.condition_number = ratio * ratio;
  }
  return out;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& h) {
  const Eigen::IOFormat csv(Eigen::FullPrecision, Eigen::DontAlignCols, ",", "\n");
  out << h.format(csv) << '\n';
}

}  // namespace adasearch
