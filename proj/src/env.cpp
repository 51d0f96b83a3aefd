#include "adasearch/env.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "adasearch/error.hpp"

namespace adasearch {

Eigen::Vector3d GridSpec::cell_center(CellIndex x) const {
  const double cx = origin.x() + (static_cast<double>(col_of(x)) + 0.5) * cell_size;
  const double cy = origin.y() + (static_cast<double>(row_of(x)) + 0.5) * cell_size;
  return {cx, cy, 0.0};
}

Eigen::Vector3d GridSpec::sensing_position(CellIndex x) const {
  Eigen::Vector3d p = cell_center(x);
  p.z() = sensor_altitude;
  return p;
}

CellIndex GridSpec::nearest_cell(const Eigen::Vector3d& p) const {
  auto clamp_axis = [&](double v, double o, std::size_t n) {
    const double f = std::floor((v - o) / cell_size);
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(n - 1)));
  };
  return index(clamp_axis(p.y(), origin.y(), rows), clamp_axis(p.x(), origin.x(), cols));
}

void GridSpec::validate() const {
  require(rows >= 1 && cols >= 1, ErrorCode::kInvalidConfig, "grid needs rows, cols >= 1");
  require(std::isfinite(cell_size) && cell_size > 0, ErrorCode::kInvalidConfig,
          "cell_size must be > 0");
  require(std::isfinite(sensor_altitude) && sensor_altitude > 0, ErrorCode::kInvalidConfig,
          "sensor_altitude must be > 0");
  require(origin.allFinite(), ErrorCode::kInvalidConfig, "origin must be finite");
}

EnvironmentMap::EnvironmentMap(GridSpec grid, Eigen::VectorXd mu, std::size_t k,
                               std::uint64_t seed)
    : grid_(std::move(grid)), mu_(std::move(mu)), k_(k), seed_(seed) {
  grid_.validate();
  require(static_cast<std::size_t>(mu_.size()) == grid_.size(), ErrorCode::kDimensionMismatch,
          "mu length must equal rows * cols");
  require(k_ >= 1 && k_ <= grid_.size(), ErrorCode::kInvalidConfig, "k must be in [1, |S|]");
  for (Eigen::Index i = 0; i < mu_.size(); ++i) {
    require(std::isfinite(mu_[i]) && mu_[i] >= 0, ErrorCode::kInvalidConfig,
            "rates must be finite and nonnegative");
  }
}

double EnvironmentMap::kth_largest(std::size_t j) const {
  require(j >= 1 && j <= size() + 1, ErrorCode::kInvalidArgument, "order statistic out of range");
  if (j == size() + 1) return 0.0;
  std::vector<double> v(mu_.data(), mu_.data() + mu_.size());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(j - 1), v.end(),
                   std::greater<>());
  return v[j - 1];
}

bool EnvironmentMap::identifiable() const {
  if (k_ == size()) return true;
  return kth_largest(k_) > kth_largest(k_ + 1);
}

EnvironmentMap build_random_env(RngSeed seed, const GridSpec& grid, std::size_t k,
                                const std::vector<double>& source_rates, double mu_bar) {
  grid.validate();
  const std::size_t n = grid.size();
  require(k >= 1 && k <= n, ErrorCode::kInvalidConfig, "k must be in [1, |S|]");
  require(source_rates.size() == k, ErrorCode::kInvalidConfig,
          "need exactly k source rates");
  for (double r : source_rates) {
    require(std::isfinite(r) && r >= 0, ErrorCode::kInvalidConfig, "source rates must be >= 0");
  }
  if (k < n) {
    require(std::isfinite(mu_bar) && mu_bar >= 0, ErrorCode::kInvalidConfig,
            "mu_bar must be >= 0");
    const double min_source = *std::min_element(source_rates.begin(), source_rates.end());
    require(min_source > mu_bar, ErrorCode::kNonIdentifiable,
            "every source rate must exceed mu_bar");
  }

  Rng rng = make_rng(seed.value, {stream::kEnvironment});
  std::vector<CellIndex> order(n);
  std::iota(order.begin(), order.end(), CellIndex{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index(rng, n - i);
    std::swap(order[i], order[j]);
  }

  Eigen::VectorXd mu = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), -1.0);
  for (std::size_t i = 0; i < k; ++i) mu[static_cast<Eigen::Index>(order[i])] = source_rates[i];
  for (Eigen::Index x = 0; x < mu.size(); ++x) {
    if (mu[x] < 0) mu[x] = mu_bar * uniform01(rng);
  }
  return EnvironmentMap(grid, std::move(mu), k, seed.value);
}

CellSet true_top_k(const EnvironmentMap& env) {
  require(env.identifiable(), ErrorCode::kNonIdentifiable,
          "tie between the k-th and (k+1)-th largest rates");
  const double threshold = env.kth_largest(env.k());
  CellSet top;
  for (CellIndex x = 0; x < env.size(); ++x) {
    if (env.mu(x) >= threshold) top.push_back(x);
  }
  return top;
}

namespace {

std::uint64_t poisson_inversion(Rng& rng, double mean) {
  const double u = uniform01(rng);
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  // The tail beyond ~mean + 40 sd has negligible mass; the bound guards
  // against rounding leaving cdf a hair below u.
  const auto k_max = static_cast<std::uint64_t>(mean + 40.0 * std::sqrt(mean) + 40.0);
  while (u > cdf && k < k_max) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

// Hormann (1993), "The transformed rejection method for generating Poisson
// random variables".
std::uint64_t poisson_ptrs(Rng& rng, double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform01(rng) - 0.5;
    const double v = uniform01(rng);
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace

std::uint64_t sample_counts(Rng& rng, double rate, double duration) {
  require(rate >= 0 && std::isfinite(rate), ErrorCode::kInvalidArgument, "rate must be >= 0");
  require(duration >= 0 && std::isfinite(duration), ErrorCode::kInvalidArgument,
          "duration must be >= 0");
  const double mean = rate * duration;
  if (mean <= 0.0) return 0;
  return mean < 30.0 ? poisson_inversion(rng, mean) : poisson_ptrs(rng, mean);
}

nlohmann::json to_json(const GridSpec& grid) {
  return {{"rows", grid.rows},
          {"cols", grid.cols},
          {"cell_size", grid.cell_size},
          {"origin", {grid.origin.x(), grid.origin.y()}},
          {"sensor_altitude", grid.sensor_altitude}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
  GridSpec g;
  g.rows = j.at("rows").get<std::size_t>();
  g.cols = j.at("cols").get<std::size_t>();
  g.cell_size = j.value("cell_size", 1.0);
  if (j.contains("origin")) {
    const auto& o = j.at("origin");
    require(o.is_array() && o.size() == 2, ErrorCode::kInvalidConfig, "origin must be [x, y]");
    g.origin = {o[0].get<double>(), o[1].get<double>()};
  }
  g.sensor_altitude = j.value("sensor_altitude", 2.0);
  g.validate();
  return g;
}

nlohmann::json to_json(const EnvironmentMap& env) {
  std::vector<double> mu(env.mu().data(), env.mu().data() + env.mu().size());
  return {{"grid", to_json(env.grid())}, {"mu", mu}, {"k", env.k()}, {"seed", env.seed()}};
}

EnvironmentMap env_from_json(const nlohmann::json& j) {
  const auto mu = j.at("mu").get<std::vector<double>>();
  return EnvironmentMap(grid_from_json(j.at("grid")),
                        Eigen::Map<const Eigen::VectorXd>(mu.data(),
                                                          static_cast<Eigen::Index>(mu.size())),
                        j.at("k").get<std::size_t>(), j.value("seed", std::uint64_t{0}));
}

std::uint64_t env_hash(const EnvironmentMap& env) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(env).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace adasearch
