#include <doctest.h>

#include <stdexcept>

#include "adasearch/confidence.hpp"
#include "oracle.hpp"

TEST_CASE("dense_solve on the identity returns its input") {
  const Eigen::VectorXd y = Eigen::Vector3d(4, -1, 2.5);
  const auto s = oracle::dense_solve(Eigen::MatrixXd::Identity(3, 3), y, 0.0);
  CHECK(s.mu_hat.isApprox(y));
  CHECK(s.sigma_diag.isApprox(Eigen::Vector3d::Ones()));
}

TEST_CASE("dense_solve needs a ridge on rank-deficient rows") {
  Eigen::MatrixXd rows(2, 2);
  rows << 1, 1, 2, 2;
  const Eigen::Vector2d y(1, 2);
  CHECK_THROWS_AS(oracle::dense_solve(rows, y, 0.0), std::runtime_error);
  CHECK(oracle::dense_solve(rows, y, 1e-3).mu_hat.allFinite());
}

TEST_CASE("naive_elim edge cases") {
  std::vector<oracle::Bounds> iv{{0, 10}, {0, 10}, {0, 10}};
  auto r = oracle::naive_elim(iv, 1, {}, {});
  CHECK(r.s_top.empty());
  CHECK(r.s_i.empty());
  r = oracle::naive_elim(iv, 1, {}, {0, 1, 2});
  CHECK(r.s_top.empty());
  CHECK(r.s_i == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("mc_coverage at mu = 0 never fails low") {
  const oracle::BoundFunctions f{adasearch::u_plus, adasearch::u_minus, adasearch::ubar_plus,
                                 adasearch::ubar_minus};
  const auto r = oracle::mc_coverage(0.0, 0.1, 10000, f);
  CHECK(r.lower_fail == 0.0);
  CHECK(r.upper_fail == 0.0);
}

TEST_CASE("brute-force objective for a hovering sensor") {
  const double p[3][3] = {{0.5, 0.5, 2}, {0.5, 0.5, 2}, {0.5, 0.5, 2}};
  CHECK(oracle::infomax_brute_force({1.0}, 1, 1, 1.0, 1.0, p, 4) == doctest::Approx(1.0));
}
