#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "adasearch/rng.hpp"

namespace adasearch {

using CellIndex = std::size_t;

/// Sorted ascending, duplicate free.
using CellSet = std::vector<CellIndex>;

/// Planar grid of emitters. Cells are indexed row-major from the origin;
/// cell (r, c) has index r * cols + c and its center at
/// origin + ((c + 0.5), (r + 0.5)) * cell_size on the ground plane.
struct GridSpec {
  std::size_t rows = 1;
  std::size_t cols = 1;
  double cell_size = 1.0;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double sensor_altitude = 2.0;

  std::size_t size() const { return rows * cols; }
  std::size_t row_of(CellIndex x) const { return x / cols; }
  std::size_t col_of(CellIndex x) const { return x % cols; }
  CellIndex index(std::size_t row, std::size_t col) const { return row * cols + col; }

  /// Emitter position (altitude 0).
  Eigen::Vector3d cell_center(CellIndex x) const;

  /// Sensing position directly above a cell at sensor_altitude.
  Eigen::Vector3d sensing_position(CellIndex x) const;

  /// Nearest cell to a planar position, clamped to the grid.
  CellIndex nearest_cell(const Eigen::Vector3d& p) const;

  void validate() const;
};

/// Ground-truth emission rates. Immutable after construction.
class EnvironmentMap {
 public:
  EnvironmentMap(GridSpec grid, Eigen::VectorXd mu, std::size_t k, std::uint64_t seed = 0);

  const GridSpec& grid() const { return grid_; }
  const Eigen::VectorXd& mu() const { return mu_; }
  double mu(CellIndex x) const { return mu_[static_cast<Eigen::Index>(x)]; }
  std::size_t k() const { return k_; }
  std::size_t size() const { return grid_.size(); }
  std::uint64_t seed() const { return seed_; }

  /// mu^(j): the j-th largest rate, 1-based. j = size()+1 gives 0.
  double kth_largest(std::size_t j) const;

  /// mu^(k) > mu^(k+1) (always true when k = |S|).
  bool identifiable() const;

 private:
  GridSpec grid_;
  Eigen::VectorXd mu_;
  std::size_t k_;
  std::uint64_t seed_;
};

/// k distinct cells (seeded Fisher-Yates) get source_rates, every other cell
/// an i.i.d. Uniform[0, mu_bar] rate.
EnvironmentMap build_random_env(RngSeed seed, const GridSpec& grid, std::size_t k,
                                const std::vector<double>& source_rates, double mu_bar);

/// S*(k). Throws kNonIdentifiable on a tie at the k / k+1 boundary.
CellSet true_top_k(const EnvironmentMap& env);

/// Draw from Poisson(rate * duration). Inversion by sequential search below a
/// mean of 30, transformed rejection (PTRS) above.
std::uint64_t sample_counts(Rng& rng, double rate, double duration);

nlohmann::json to_json(const GridSpec& grid);
GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EnvironmentMap& env);
EnvironmentMap env_from_json(const nlohmann::json& j);

/// FNV-1a of the canonical JSON serialization.
std::uint64_t env_hash(const EnvironmentMap& env);

}  // namespace adasearch
