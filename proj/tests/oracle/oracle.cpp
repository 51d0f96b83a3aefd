#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace oracle {

DenseSolution dense_solve(const Eigen::MatrixXd& rows, const Eigen::VectorXd& y_tilde,
                          double ridge) {
  if (rows.rows() != y_tilde.size()) throw std::runtime_error("dimension mismatch");
  const Eigen::Index n = rows.cols();
  Eigen::MatrixXd a = rows.transpose() * rows + ridge * Eigen::MatrixXd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw std::runtime_error("singular normal equations");
  const Eigen::MatrixXd inv = a.inverse();
  return {inv * (rows.transpose() * y_tilde), inv.diagonal()};
}

ElimResult naive_elim(const std::vector<Bounds>& intervals, std::size_t k,
                      const std::vector<std::size_t>& s_top, const std::vector<std::size_t>& s_i) {
  const double inf = std::numeric_limits<double>::infinity();
  ElimResult out;
  out.s_top = s_top;
  if (s_i.empty()) return out;

  std::vector<double> ucbs, lcbs;
  for (auto x : s_i) {
    ucbs.push_back(intervals[x].ucb);
    lcbs.push_back(intervals[x].lcb);
  }
  std::sort(ucbs.begin(), ucbs.end(), std::greater<>());
  std::sort(lcbs.begin(), lcbs.end(), std::greater<>());

  const std::size_t j_top = k - s_top.size() + 1;
  const double top_thr = j_top <= ucbs.size() ? ucbs[j_top - 1] : -inf;
  for (auto x : s_i) {
    if (intervals[x].lcb > top_thr) out.s_top.push_back(x);
  }
  std::sort(out.s_top.begin(), out.s_top.end());

  const std::size_t j_bot = k - out.s_top.size();
  if (j_bot == 0) return out;
  const double bot_thr = j_bot <= lcbs.size() ? lcbs[j_bot - 1] : -inf;
  for (auto x : s_i) {
    const bool confirmed = std::find(out.s_top.begin(), out.s_top.end(), x) != out.s_top.end();
    if (!confirmed && intervals[x].ucb >= bot_thr) out.s_i.push_back(x);
  }
  return out;
}

CoverageRates mc_coverage(double mu, double delta, int n_draws, const BoundFunctions& f,
                          std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  long up = 0, lo = 0, nest = 0;
  const double lo_bar = f.ubar_minus(mu, delta);
  const double up_bar = f.ubar_plus(mu, delta);
  for (int i = 0; i < n_draws; ++i) {
    double n = 0.0;
    if (mu > 0) n = static_cast<double>(std::poisson_distribution<long>(mu)(gen));
    const double u_p = f.u_plus(n, delta);
    const double u_m = f.u_minus(n, delta);
    up += mu > u_p;
    lo += mu < u_m;
    nest += !(lo_bar <= u_m && u_m <= mu && mu <= u_p && u_p <= up_bar);
  }
  CoverageRates r;
  const double nd = n_draws;
  r.upper_fail = up / nd;
  r.lower_fail = lo / nd;
  r.nesting_fail = nest / nd;
  r.sigma_one_sided = std::sqrt(delta * (1 - delta) / nd);
  const double d2 = std::min(1.0, 2 * delta);
  r.sigma_two_sided = std::sqrt(d2 * (1 - d2) / nd);
  return r;
}

double infomax_brute_force(const std::vector<double>& sigma, int rows, int cols, double cell,
                           double c, const double p[3][3], int n_samples) {
  double total = 0.0;
  for (int i = 1; i <= n_samples; ++i) {
    const double s = static_cast<double>(i) / n_samples;
    double q[3];
    for (int a = 0; a < 3; ++a) {
      q[a] = (1 - s) * (1 - s) * p[0][a] + 2 * (1 - s) * s * p[1][a] + s * s * p[2][a];
    }
    for (int r = 0; r < rows; ++r) {
      for (int col = 0; col < cols; ++col) {
        const double dx = (col + 0.5) * cell - q[0];
        const double dy = (r + 0.5) * cell - q[1];
        const double dz = q[2];
        total += sigma[static_cast<std::size_t>(r * cols + col)] * c / (dx * dx + dy * dy + dz * dz);
      }
    }
  }
  return total;
}

}  // namespace oracle
