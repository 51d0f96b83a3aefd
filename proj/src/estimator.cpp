#include "adasearch/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <boost/math/special_functions/erf.hpp>

namespace adasearch {

Interval gaussian_interval(double mu_hat, double sigma_kk, double z) {
  require(sigma_kk > 0.0, ErrorCode::kInvalidArgument, "variance must be > 0");
  require(z >= 0.0 && std::isfinite(z), ErrorCode::kInvalidArgument, "z must be >= 0");
  const double half = z * std::sqrt(sigma_kk);
  return {std::max(0.0, mu_hat - half), std::max(0.0, mu_hat + half)};
}

double alpha_of_delta(double delta) {
  require(delta > 0.0 && delta < 1.0, ErrorCode::kInvalidArgument, "delta must be in (0, 1)");
  return std::numbers::sqrt2 * boost::math::erfc_inv(delta);
}

double ConfidenceWidth::z(double delta_i) const {
  switch (kind) {
    case Kind::kRoundSchedule: return alpha_of_delta(delta_i);
    case Kind::kFixedQuantile: return alpha_of_delta(value);
    case Kind::kFixedMultiplier:
      require(value >= 0.0, ErrorCode::kInvalidConfig, "multiplier must be >= 0");
      return value;
  }
  return alpha_of_delta(delta_i);
}

void write_posterior_csv(std::ostream& out, const PosteriorSummary<double>& posterior) {
  out << "cell_index,mu_hat,sigma\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < posterior.mu_hat.size(); ++i) {
    out << i << ',' << posterior.mu_hat[i] << ',' << std::sqrt(posterior.sigma_diag[i]) << '\n';
  }
}

}  // namespace adasearch
