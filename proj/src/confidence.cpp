#include "adasearch/confidence.hpp"

#include <algorithm>
#include <cmath>

#include "adasearch/error.hpp"

namespace adasearch {

namespace {

double log_inv(double delta) {
  require(delta > 0.0 && delta < 1.0, ErrorCode::kInvalidArgument, "delta must be in (0, 1)");
  return -std::log(delta);
}

void check_nonneg(double v, const char* what) {
  require(std::isfinite(v) && v >= 0.0, ErrorCode::kInvalidArgument, what);
}

}  // namespace

double u_plus(double n, double delta) {
  check_nonneg(n, "count must be >= 0");
  const double l = log_inv(delta);
  return 2.0 * l + n + std::sqrt(2.0 * n * l);
}

double u_minus(double n, double delta) {
  check_nonneg(n, "count must be >= 0");
  const double l = log_inv(delta);
  return std::max(0.0, n - std::sqrt(2.0 * n * l));
}

double ubar_plus(double mu, double delta) {
  check_nonneg(mu, "mean must be >= 0");
  const double l = log_inv(delta);
  return mu + (14.0 / 3.0) * l + 2.0 * std::sqrt(2.0 * mu * l);
}

double ubar_minus(double mu, double delta) {
  check_nonneg(mu, "mean must be >= 0");
  const double l = log_inv(delta);
  return std::max(0.0, mu - 2.0 * std::sqrt(2.0 * mu * l));
}

EnvelopeInterval envelope(double mu, double delta) {
  return {ubar_minus(mu, delta), ubar_plus(mu, delta)};
}

double round_delta(double delta_total, std::size_t n_cells, int round_i) {
  require(round_i >= 1, ErrorCode::kInvalidArgument, "rounds are 1-indexed");
  require(n_cells >= 1, ErrorCode::kInvalidArgument, "need at least one cell");
  require(delta_total > 0.0 && delta_total < 1.0, ErrorCode::kInvalidArgument,
          "delta must be in (0, 1)");
  const double i = round_i;
  return delta_total / (4.0 * static_cast<double>(n_cells) * i * i);
}

Interval pointwise_interval(double n, double tau, double delta) {
  require(std::isfinite(tau) && tau > 0.0, ErrorCode::kInvalidArgument, "tau must be > 0");
  return {u_minus(n, delta) / tau, u_plus(n, delta) / tau};
}

}  // namespace adasearch
