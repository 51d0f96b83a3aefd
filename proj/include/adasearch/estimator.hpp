#pragma once

#include <cmath>
#include <iosfwd>
#include <optional>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "adasearch/confidence.hpp"
#include "adasearch/error.hpp"

namespace adasearch {

/// How a raw count y is turned into a weighted least-squares row.
///   kInverseCount:     row = h / (y + b),       y~ = y / (y + b)
///   kInverseSqrtCount: row = h / sqrt(y + b),   y~ = y / sqrt(y + b)
/// The second weights each residual by the plug-in Poisson standard
/// deviation, so that (sum row row^T)^-1 is the usual variance estimate.
enum class RowWeighting { kInverseCount, kInverseSqrtCount };

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct WeightedRow {
  VectorX<Scalar> row;
  Scalar y_tilde;
};

template <typename Scalar>
Scalar row_weight(Scalar y, Scalar b, RowWeighting weighting) {
  require(b > 0, ErrorCode::kInvalidArgument, "bias b must be > 0");
  require(y >= 0, ErrorCode::kInvalidArgument, "count must be >= 0");
  return weighting == RowWeighting::kInverseCount ? Scalar(1) / (y + b)
                                                  : Scalar(1) / std::sqrt(y + b);
}

template <typename Scalar>
WeightedRow<Scalar> weighted_row(const VectorX<Scalar>& h, Scalar y, Scalar b,
                                 RowWeighting weighting) {
  const Scalar w = row_weight(y, b, weighting);
  return {h * w, y * w};
}

template <typename Scalar>
WeightedRow<Scalar> rescaled_row(const VectorX<Scalar>& h, Scalar y, Scalar b) {
  return weighted_row(h, y, b, RowWeighting::kInverseCount);
}

template <typename Scalar>
struct PosteriorSummary {
  VectorX<Scalar> mu_hat;      // clamped at 0
  VectorX<Scalar> mu_hat_raw;  // unconstrained least-squares solution
  VectorX<Scalar> sigma_diag;
};

/// Information-form accumulator for the weighted least-squares problem.
template <typename Scalar>
class EstimatorState {
 public:
  using Vector = VectorX<Scalar>;
  using Matrix = MatrixX<Scalar>;

  explicit EstimatorState(Eigen::Index n, Scalar bias_b = Scalar(1))
      : lambda_(Matrix::Zero(n, n)), beta_(Vector::Zero(n)), bias_b_(bias_b) {
    require(n >= 1, ErrorCode::kInvalidArgument, "estimator needs at least one cell");
    require(bias_b > 0, ErrorCode::kInvalidArgument, "bias b must be > 0");
  }

  Eigen::Index size() const { return beta_.size(); }
  const Matrix& lambda() const { return lambda_; }
  const Vector& beta() const { return beta_; }
  long n_measurements() const { return n_measurements_; }
  Scalar bias_b() const { return bias_b_; }

  void update(const Vector& row, Scalar y_tilde) {
    require(row.size() == size(), ErrorCode::kDimensionMismatch, "row length must equal |S|");
    lambda_.noalias() += row * row.transpose();
    beta_.noalias() += row * y_tilde;
    ++n_measurements_;
  }

  /// Several measurements sharing one sensitivity column h, folded into one
  /// rank-1 term: lambda += (sum w^2) h h^T, beta += (sum w^2 y) h.
  void update_batch(const Vector& h, Scalar sum_w2, Scalar sum_w2y, long count) {
    require(h.size() == size(), ErrorCode::kDimensionMismatch, "row length must equal |S|");
    require(sum_w2 >= 0 && count >= 0, ErrorCode::kInvalidArgument, "weights must be >= 0");
    lambda_.noalias() += sum_w2 * (h * h.transpose());
    beta_.noalias() += sum_w2y * h;
    n_measurements_ += count;
  }

  /// Adds precision p on each diagonal entry (a weak zero-mean prior).
  void add_prior_precision(Scalar p) {
    require(p >= 0, ErrorCode::kInvalidArgument, "prior precision must be >= 0");
    lambda_.diagonal().array() += p;
  }

  Scalar default_ridge() const { return Scalar(1e-9) * lambda_.trace() / Scalar(size()); }

  PosteriorSummary<Scalar> solve(std::optional<Scalar> ridge = std::nullopt) const {
    const Scalar r = ridge.value_or(default_ridge());
    require(r >= 0 && std::isfinite(static_cast<double>(r)), ErrorCode::kInvalidArgument,
            "ridge must be >= 0");
    Matrix a = lambda_;
    a.diagonal().array() += r;
    Eigen::LLT<Matrix> llt(a);
    require(llt.info() == Eigen::Success, ErrorCode::kSingularSystem,
            "information matrix is singular or not positive definite");
    const auto n = size();
    PosteriorSummary<Scalar> out;
    out.mu_hat_raw = llt.solve(beta_);
    // diag(A^-1) = squared column norms of L^-1.
    Matrix l_inv = Matrix::Identity(n, n);
    llt.matrixL().solveInPlace(l_inv);
    out.sigma_diag = l_inv.colwise().squaredNorm().transpose();
    require(out.mu_hat_raw.allFinite() && out.sigma_diag.allFinite() &&
                (out.sigma_diag.array() > 0).all(),
            ErrorCode::kSingularSystem, "information matrix is numerically singular");
    out.mu_hat = out.mu_hat_raw.cwiseMax(Scalar(0));
    return out;
  }

 private:
  Matrix lambda_;
  Vector beta_;
  long n_measurements_ = 0;
  Scalar bias_b_;
};

/// (max(0, mu - z sqrt(s)), mu + z sqrt(s)). An upper end below zero is
/// raised to zero so that the interval stays inside the rate domain.
Interval gaussian_interval(double mu_hat, double sigma_kk, double z);

/// Two-sided standard-normal quantile: Phi^-1(1 - delta / 2).
double alpha_of_delta(double delta);

/// Multiplier applied to sqrt(Sigma_kk) in the estimator intervals.
struct ConfidenceWidth {
  enum class Kind {
    kRoundSchedule,    // alpha_of_delta(delta_i)
    kFixedQuantile,    // alpha_of_delta(value) every round
    kFixedMultiplier,  // value used as z directly
  };
  Kind kind = Kind::kFixedQuantile;
  double value = 1e-4;

  double z(double delta_i) const;
};

void write_posterior_csv(std::ostream& out, const PosteriorSummary<double>& posterior);

}  // namespace adasearch
