#include <doctest.h>

#include <cmath>

#include "adasearch/confidence.hpp"
#include "adasearch/error.hpp"
#include "oracle.hpp"

using namespace adasearch;

namespace {

oracle::BoundFunctions production() {
  return {u_plus, u_minus, ubar_plus, ubar_minus};
}

}  // namespace

TEST_CASE("u_plus closed form") {
  CHECK(u_plus(0, std::exp(-1.0)) == doctest::Approx(2.0));
  CHECK(u_plus(8, std::exp(-2.0)) == doctest::Approx(4 + 8 + std::sqrt(32.0)));
  CHECK(u_plus(0, 1 - 1e-12) < 1e-10);
  CHECK_THROWS_AS(u_plus(1, 0.0), Error);
  CHECK_THROWS_AS(u_plus(1, 1.0), Error);
  CHECK_THROWS_AS(u_plus(-1, 0.5), Error);
}

TEST_CASE("u_minus closed form") {
  CHECK(u_minus(0, 0.3) == 0.0);
  CHECK(u_minus(8, std::exp(-2.0)) == doctest::Approx(8 - std::sqrt(32.0)));
  CHECK(u_minus(1, std::exp(-8.0)) == 0.0);
}

TEST_CASE("envelope closed forms") {
  CHECK(ubar_minus(0, 0.1) == 0.0);
  CHECK(ubar_minus(100, std::exp(-2.0)) == doctest::Approx(60.0));
  CHECK(ubar_plus(0, std::exp(-3.0)) == doctest::Approx(14.0));
  const auto e = envelope(100, std::exp(-2.0));
  CHECK(e.lcb_bar <= e.ucb_bar);
}

TEST_CASE("round_delta schedule") {
  CHECK(round_delta(0.05, 256, 1) == doctest::Approx(0.05 / 1024));
  CHECK(round_delta(0.05, 256, 2) == doctest::Approx(0.05 / 4096));
  CHECK_THROWS_AS(round_delta(0.05, 256, 0), Error);
}

TEST_CASE("pointwise intervals") {
  const auto a = pointwise_interval(0, 1, std::exp(-1.0));
  CHECK(a.lcb == 0.0);
  CHECK(a.ucb == doctest::Approx(2.0));
  const auto b = pointwise_interval(8, 2, std::exp(-2.0));
  CHECK(b.lcb == doctest::Approx(1.1716).epsilon(1e-4));
  CHECK(b.ucb == doctest::Approx(8.8284).epsilon(1e-4));
  CHECK_THROWS_AS(pointwise_interval(1, 0, 0.1), Error);
  for (int n = 0; n < 200; n += 7) {
    for (double tau : {0.5, 1.0, 3.0}) {
      const auto iv = pointwise_interval(n, tau, 1e-3);
      CHECK(iv.contains(n / tau));
    }
  }
}

TEST_CASE("bounds are monotone") {
  for (double delta : {0.3, 0.01, 1e-6}) {
    double prev_p = -1, prev_m = -1;
    for (int n = 0; n < 300; ++n) {
      CHECK(u_plus(n, delta) >= prev_p);
      CHECK(u_minus(n, delta) >= prev_m);
      prev_p = u_plus(n, delta);
      prev_m = u_minus(n, delta);
    }
  }
  for (int n : {0, 3, 40}) {
    double prev = -1;
    for (double delta = 0.9; delta > 1e-9; delta /= 3) {
      CHECK(u_plus(n, delta) >= prev);
      prev = u_plus(n, delta);
    }
  }
}

TEST_CASE("Monte Carlo coverage of the empirical bounds") {
  const auto r = oracle::mc_coverage(50, 0.05, 100000, production());
  CHECK(r.upper_fail <= 0.05 + 3 * r.sigma_one_sided);
  CHECK(r.lower_fail <= 0.05 + 3 * r.sigma_one_sided);
  const auto loose = oracle::mc_coverage(50, 0.5, 100000, production());
  CHECK(loose.upper_fail <= 0.5 + 3 * loose.sigma_one_sided);
  CHECK(loose.lower_fail <= 0.5 + 3 * loose.sigma_one_sided);
  const auto zero = oracle::mc_coverage(0, 0.05, 10000, production());
  CHECK(zero.lower_fail == 0.0);
}
