#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "adasearch/core.hpp"
#include "adasearch/error.hpp"
#include "oracle.hpp"

using namespace adasearch;

namespace {

IntervalTable table(std::initializer_list<Interval> ivs) {
  IntervalTable t(ivs.size());
  CellIndex x = 0;
  for (const auto& iv : ivs) t.set(x++, iv);
  return t;
}

EliminationState state(CellSet candidates, CellSet confirmed, std::size_t k) {
  EliminationState s;
  s.candidates = std::move(candidates);
  s.confirmed = std::move(confirmed);
  s.k = k;
  return s;
}

GridSpec grid(std::size_t rows, std::size_t cols, double cell = 4.0) {
  GridSpec g;
  g.rows = rows;
  g.cols = cols;
  g.cell_size = cell;
  return g;
}

bool subset(const CellSet& a, const CellSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

CellSet intersection(const CellSet& a, const CellSet& b) {
  CellSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

TEST_CASE("kth_largest conventions") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(kth_largest({3, 1, 2}, 0) == inf);
  CHECK(kth_largest({3, 1, 2}, 1) == 3);
  CHECK(kth_largest({3, 1, 2}, 3) == 1);
  CHECK(kth_largest({3, 1, 2}, 4) == -inf);
}

TEST_CASE("top_elim") {
  // a:[5,6] b:[1,2] c:[0,3]
  const auto t = table({{5, 6}, {1, 2}, {0, 3}});
  CHECK(top_elim(state({0, 1, 2}, {}, 1), t) == CellSet{0});
  CHECK(top_elim(state({}, {2}, 1), t) == CellSet{2});

  const auto t4 = table({{5, 10}, {3.5, 4}, {0, 3}, {0, 2}});
  CHECK(top_elim(state({0, 1, 2, 3}, {}, 2), t4) == CellSet{0, 1});
}

TEST_CASE("bot_elim") {
  const auto t = table({{5, 6}, {1, 2}, {0, 3}});
  CHECK(bot_elim(state({0, 1, 2}, {}, 1), t, {0}).empty());
  CHECK(bot_elim(state({0, 1, 2}, {}, 1), t, {}) == CellSet{0});
  const auto wide = table({{0, 10}, {0, 10}, {0, 10}});
  CHECK(bot_elim(state({0, 1, 2}, {}, 1), wide, {}) == CellSet{0, 1, 2});
}

TEST_CASE("elimination needs intervals for every candidate") {
  IntervalTable t(3);
  t.set(0, {1, 2});
  try {
    top_elim(state({0, 1}, {}, 1), t);
    FAIL("expected invalid state");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidState);
  }
  CHECK_THROWS_AS(t.set(1, {3, 2}), Error);
}

TEST_CASE("termination checks") {
  const auto t = table({{5, 6}});
  auto d = check_termination(state({}, {0}, 1), t, ExactRule{});
  CHECK(d.done);
  CHECK(d.returned == CellSet{0});

  d = check_termination(table({{7, 9}, {1, 6.9}, {0, 2}}), 1, ExactRule{});
  CHECK(d.done);
  CHECK(d.returned == CellSet{0});
  CHECK_FALSE(check_termination(table({{7, 9}, {1, 7.1}, {0, 2}}), 1, ExactRule{}).done);

  const auto close = table({{4, 4.5}, {3.8, 4.6}, {0, 1}});
  CHECK_FALSE(check_termination(state({0, 1}, {}, 1), close, ExactRule{}).done);
  d = check_termination(state({0, 1}, {}, 1), close, ApproximateRule{1.0});
  CHECK(d.done);
  CHECK(d.returned == CellSet{0, 1});
  d = check_termination(state({0, 1}, {2}, 2), close, ApproximateRule{1.0});
  CHECK(d.returned == CellSet{0, 1, 2});

  d = check_termination(close, 1, ApproximateRule{1.0});
  CHECK(d.done);
  CHECK(d.returned == CellSet{0, 1});
  CHECK(check_termination(close, 3, ExactRule{}).done);
}

TEST_CASE("elimination matches the sorting oracle") {
  Rng rng = make_rng(2718, {});
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 12);
    const std::size_t k = 1 + uniform_index(rng, std::min<std::size_t>(4, n));
    std::vector<oracle::Bounds> ob(n);
    IntervalTable t(n);
    for (CellIndex x = 0; x < n; ++x) {
      // Coarse values so that ties occur.
      const double a = std::floor(10 * uniform01(rng));
      const double b = a + std::floor(6 * uniform01(rng));
      ob[x] = {a, b};
      t.set(x, {a, b});
    }
    CellSet confirmed, candidates;
    const std::size_t n_top = uniform_index(rng, k + 1);
    for (CellIndex x = 0; x < n; ++x) {
      if (confirmed.size() < n_top && uniform01(rng) < 0.3) {
        confirmed.push_back(x);
      } else if (uniform01(rng) < 0.8) {
        candidates.push_back(x);
      }
    }
    const auto s = state(candidates, confirmed, k);
    const CellSet top = top_elim(s, t);
    const CellSet cand = bot_elim(s, t, top);
    const auto o = oracle::naive_elim(ob, k, confirmed, candidates);
    CHECK(top == CellSet(o.s_top.begin(), o.s_top.end()));
    CHECK(cand == CellSet(o.s_i.begin(), o.s_i.end()));
  }
}

TEST_CASE("a huge gap separates within three rounds") {
  const EnvironmentMap env(grid(1, 2), Eigen::Vector2d(0, 100), 1);
  SearchConfig cfg;
  int good = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto r = run_adasearch(env, cfg, RngSeed{s});
    good += r.terminated && r.returned == CellSet{1} && r.rounds <= 3;
  }
  CHECK(good >= 99);
}

TEST_CASE("oracle intervals finish in one pass") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    for (std::size_t k : {1, 3}) {
      std::vector<double> rates;
      for (std::size_t i = 0; i < k; ++i) rates.push_back(500 + 100 * i);
      const auto env = build_random_env(RngSeed{s}, grid(4, 4), k, rates, 400);
      SearchConfig cfg;
      cfg.intervals = IntervalSource::kOracle;
      for (const SensitivityModel& m : {SensitivityModel{Pointwise{}},
                                        SensitivityModel{InverseSquare{}}}) {
        cfg.model = m;
        const auto r = run_adasearch(env, cfg, RngSeed{s});
        CHECK(r.terminated);
        CHECK(r.rounds == 1);
        CHECK(r.returned == true_top_k(env));
        CHECK(r.correct);
      }
    }
  }
}

TEST_CASE("round invariants and runtime accounting") {
  SearchConfig cfg;
  cfg.tau_0 = 0.05;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const std::size_t k = 1 + s % 3;
    std::vector<double> rates;
    for (std::size_t i = 0; i < k; ++i) rates.push_back(60 + 5 * i);
    const auto env = build_random_env(RngSeed{s}, grid(4, 4), k, rates, 50);
    const CellSet truth = true_top_k(env);
    int violations = 0;
    const auto r = run_adasearch(env, cfg, RngSeed{s}, [&](const RoundSnapshot& snap) {
      if (!intersection(snap.new_confirmed, snap.new_candidates).empty()) ++violations;
      if (!subset(snap.new_candidates, snap.before.candidates)) ++violations;
      if (!subset(snap.before.confirmed, snap.new_confirmed)) ++violations;
      if (snap.new_confirmed.size() > k) ++violations;
      bool covered = true;
      for (CellIndex x : snap.before.candidates) covered &= snap.intervals.at(x).contains(env.mu(x));
      if (covered) {
        if (!subset(snap.new_confirmed, truth)) ++violations;
        CellSet both;
        std::set_union(snap.new_confirmed.begin(), snap.new_confirmed.end(),
                       snap.new_candidates.begin(), snap.new_candidates.end(),
                       std::back_inserter(both));
        if (!subset(truth, both)) ++violations;
      }
    });
    CHECK(violations == 0);
    CHECK(r.terminated);

    double total = 0, sample = 0;
    for (const auto& e : r.log) {
      total += e.tau * e.candidates + cfg.tau_0 * (env.size() - e.candidates);
      sample += e.tau * e.candidates;
      CHECK(e.sim_time == doctest::Approx(total));
    }
    CHECK(r.sim_runtime == doctest::Approx(total));
    CHECK(r.sample_time == doctest::Approx(sample));
    for (std::size_t i = 1; i < r.errors.size(); ++i) CHECK(r.errors[i].t > r.errors[i - 1].t);
  }
}

TEST_CASE("runs are reproducible from the seed") {
  const auto env = build_random_env(RngSeed{5}, grid(4, 4), 1, {120}, 100);
  SearchConfig cfg;
  cfg.tau_0 = 0.05;
  const auto a = run_adasearch(env, cfg, RngSeed{9});
  const auto b = run_adasearch(env, cfg, RngSeed{9});
  std::ostringstream la, lb;
  write_round_log_csv(la, a);
  write_round_log_csv(lb, b);
  CHECK(la.str() == lb.str());
  CHECK(a.returned == b.returned);
  REQUIRE(a.errors.size() == b.errors.size());
  for (std::size_t i = 0; i < a.errors.size(); ++i) {
    CHECK(a.errors[i].grid_error == b.errors[i].grid_error);
  }
}

TEST_CASE("runs that cannot separate stop at max_rounds") {
  const EnvironmentMap env(grid(1, 2), Eigen::Vector2d(100, 99.99), 1);
  SearchConfig cfg;
  cfg.max_rounds = 3;
  const auto r = run_adasearch(env, cfg, RngSeed{1});
  CHECK_FALSE(r.terminated);
  CHECK_FALSE(r.correct);
  CHECK(r.rounds == 3);
  CHECK(r.diagnostic.find("max_rounds") != std::string::npos);

  const EnvironmentMap tie(grid(1, 2), Eigen::Vector2d(5, 5), 1);
  CHECK_THROWS_AS(run_adasearch(tie, cfg, RngSeed{1}), Error);
  cfg.rule = ApproximateRule{1.0};
  cfg.max_rounds = 50;
  const auto approx = run_adasearch(tie, cfg, RngSeed{1});
  CHECK(approx.terminated);
  CHECK(approx.returned == CellSet{0, 1});
}

TEST_CASE("fresh per-round samples also find the source") {
  SearchConfig cfg;
  cfg.accumulation = PointwiseAccumulation::kFresh;
  cfg.tau_0 = 0.05;
  int good = 0;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto env = build_random_env(RngSeed{s}, grid(4, 4), 1, {200}, 150);
    good += run_adasearch(env, cfg, RngSeed{s}).correct;
  }
  CHECK(good >= 29);
}

TEST_CASE("physical model finds the source on the full grid") {
  SearchConfig cfg;
  cfg.model = InverseSquare{1.0};
  int good = 0;
  for (std::uint64_t s = 0; s < 25; ++s) {
    const auto env = build_random_env(RngSeed{s}, grid(16, 16), 1, {800}, 400);
    good += run_adasearch(env, cfg, RngSeed{s}).correct;
  }
  CHECK(good >= 24);
}

TEST_CASE("eps-correctness") {
  const EnvironmentMap env(grid(1, 3), Eigen::Vector3d(800, 799, 10), 1);
  CHECK(is_eps_correct({0, 1}, env, 10));
  CHECK(is_eps_correct({0}, env, 10));
  CHECK_FALSE(is_eps_correct({1}, env, 10));
  CHECK_FALSE(is_eps_correct({0, 2}, env, 10));
}

TEST_CASE("search config validation") {
  SearchConfig cfg;
  cfg.delta_total = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = SearchConfig{};
  cfg.rule = ApproximateRule{0.0};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = SearchConfig{};
  cfg.dwell_growth = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
