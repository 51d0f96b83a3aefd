#include "adasearch/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>

#include "adasearch/error.hpp"

namespace adasearch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CellSet set_union(const CellSet& a, const CellSet& b) {
  CellSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const CellSet& s, CellIndex x) { return std::binary_search(s.begin(), s.end(), x); }

std::vector<double> collect(const CellSet& cells, const IntervalTable& t, bool upper) {
  std::vector<double> v;
  v.reserve(cells.size());
  for (CellIndex x : cells) v.push_back(upper ? t.at(x).ucb : t.at(x).lcb);
  return v;
}

CellSet all_cells(std::size_t n) {
  CellSet s(n);
  std::iota(s.begin(), s.end(), CellIndex{0});
  return s;
}

/// eps-agreement: min LCB >= max UCB - eps over a nonempty set.
bool agree_within(const CellSet& cells, const IntervalTable& t, double eps) {
  if (cells.empty()) return false;
  double min_lcb = kInf;
  double max_ucb = -kInf;
  for (CellIndex x : cells) {
    min_lcb = std::min(min_lcb, t.at(x).lcb);
    max_ucb = std::max(max_ucb, t.at(x).ucb);
  }
  return min_lcb >= max_ucb - eps;
}

}  // namespace

void IntervalTable::set(CellIndex x, Interval iv) {
  require(x < values_.size(), ErrorCode::kInvalidArgument, "cell outside interval table");
  require(iv.lcb >= 0 && iv.lcb <= iv.ucb && std::isfinite(iv.ucb), ErrorCode::kInvalidState,
          "interval must satisfy 0 <= lcb <= ucb < inf");
  values_[x] = iv;
  present_[x] = 1;
}

const Interval& IntervalTable::at(CellIndex x) const {
  require(has(x), ErrorCode::kInvalidState, "no interval for cell " + std::to_string(x));
  return values_[x];
}

EliminationState EliminationState::initial(std::size_t n_cells, std::size_t k, double tau_0,
                                           double delta_total) {
  require(k >= 1 && k <= n_cells, ErrorCode::kInvalidConfig, "k must be in [1, |S|]");
  EliminationState s;
  s.candidates = all_cells(n_cells);
  s.k = k;
  s.tau = tau_0;
  s.delta_total = delta_total;
  return s;
}

double kth_largest(std::vector<double> values, std::size_t j) {
  if (j == 0) return kInf;
  if (j > values.size()) return -kInf;
  const auto nth = values.begin() + static_cast<std::ptrdiff_t>(j - 1);
  std::nth_element(values.begin(), nth, values.end(), std::greater<>());
  return *nth;
}

CellSet top_elim(const EliminationState& state, const IntervalTable& intervals) {
  require(state.confirmed.size() <= state.k, ErrorCode::kInvalidState, "|S_top| exceeds k");
  if (state.candidates.empty()) return state.confirmed;
  const std::size_t j = state.k - state.confirmed.size() + 1;
  const double threshold = kth_largest(collect(state.candidates, intervals, true), j);
  CellSet added;
  for (CellIndex x : state.candidates) {
    if (intervals.at(x).lcb > threshold) added.push_back(x);
  }
  return set_union(state.confirmed, added);
}

CellSet bot_elim(const EliminationState& state, const IntervalTable& intervals,
                 const CellSet& new_confirmed) {
  require(new_confirmed.size() <= state.k, ErrorCode::kInvalidState, "|S_top| exceeds k");
  const std::size_t j = state.k - new_confirmed.size();
  const double threshold = kth_largest(collect(state.candidates, intervals, false), j);
  CellSet kept;
  for (CellIndex x : state.candidates) {
    if (contains(new_confirmed, x)) continue;
    if (intervals.at(x).ucb >= threshold) kept.push_back(x);
  }
  return kept;
}

TerminationDecision check_termination(const EliminationState& state,
                                      const IntervalTable& intervals,
                                      const TerminationRule& rule) {
  if (state.candidates.empty()) return {true, state.confirmed};
  if (const auto* approx = std::get_if<ApproximateRule>(&rule)) {
    if (agree_within(state.candidates, intervals, approx->epsilon)) {
      return {true, set_union(state.candidates, state.confirmed)};
    }
  }
  return {};
}

TerminationDecision check_termination(const IntervalTable& intervals, std::size_t k,
                                      const TerminationRule& rule) {
  const std::size_t n = intervals.n_cells();
  require(k >= 1 && k <= n, ErrorCode::kInvalidArgument, "k must be in [1, |S|]");
  const CellSet cells = all_cells(n);
  const std::vector<double> lcb = collect(cells, intervals, false);
  const std::vector<double> ucb = collect(cells, intervals, true);
  const double kth_lcb = kth_largest(lcb, k);

  if (kth_lcb > kth_largest(ucb, k + 1)) {
    CellSet order = cells;
    std::stable_sort(order.begin(), order.end(),
                     [&](CellIndex a, CellIndex b) { return lcb[a] > lcb[b]; });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return {true, order};
  }
  if (const auto* approx = std::get_if<ApproximateRule>(&rule)) {
    CellSet plausible;
    for (CellIndex x : cells) {
      if (ucb[x] >= kth_lcb) plausible.push_back(x);
    }
    if (agree_within(plausible, intervals, approx->epsilon)) return {true, plausible};
  }
  return {};
}

void SearchConfig::validate() const {
  require(delta_total > 0 && delta_total < 1, ErrorCode::kInvalidConfig,
          "delta_total must be in (0, 1)");
  require(tau_0 > 0 && std::isfinite(tau_0), ErrorCode::kInvalidConfig, "tau_0 must be > 0");
  require(dwell_growth > 1 && std::isfinite(dwell_growth), ErrorCode::kInvalidConfig,
          "dwell growth must be > 1");
  require(measurement_interval > 0 && std::isfinite(measurement_interval),
          ErrorCode::kInvalidConfig, "measurement interval must be > 0");
  require(bias_b > 0, ErrorCode::kInvalidConfig, "bias b must be > 0");
  require(max_rounds >= 1, ErrorCode::kInvalidConfig, "max_rounds must be >= 1");
  if (const auto* approx = std::get_if<ApproximateRule>(&rule)) {
    require(approx->epsilon > 0, ErrorCode::kInvalidConfig, "epsilon must be > 0");
  }
  if (const auto* m = std::get_if<InverseSquare>(&model)) {
    require(m->c > 0, ErrorCode::kInvalidConfig, "inverse-square constant must be > 0");
  }
  if (width.kind != ConfidenceWidth::Kind::kRoundSchedule) {
    require(width.value > 0, ErrorCode::kInvalidConfig, "confidence width value must be > 0");
  }
}

Survey::Survey(const EnvironmentMap& env, const SearchConfig& config, RngSeed seed)
    : env_(env), config_(config), seed_(seed), pointwise_(is_pointwise(config.model)) {
  const auto n = static_cast<Eigen::Index>(env.size());
  counts_ = exposure_ = round_counts_ = round_exposure_ = Eigen::VectorXd::Zero(n);
  if (!pointwise_) {
    estimator_.emplace(n, config.bias_b);
    columns_.reserve(env.size());
    for (CellIndex x = 0; x < env.size(); ++x) {
      columns_.push_back(sensitivity_column(config.model, env.grid(), config_above(env.grid(), x)));
    }
  }
}

void Survey::begin_round(bool fresh) {
  fresh_ = fresh;
  round_counts_.setZero();
  round_exposure_.setZero();
  if (fresh && estimator_) {
    estimator_.emplace(static_cast<Eigen::Index>(env_.size()), config_.bias_b);
    posterior_.reset();
  }
}

void Survey::dwell(int round, std::size_t step, const SensingConfig& z, double tau) {
  require(tau > 0, ErrorCode::kInvalidArgument, "dwell must be > 0");
  Rng rng = make_rng(seed_.value, {stream::kMeasurement, static_cast<std::uint64_t>(round),
                                   static_cast<std::uint64_t>(step)});
  if (pointwise_) {
    const auto c = static_cast<Eigen::Index>(z.cell_index);
    const auto y = static_cast<double>(sample_counts(rng, env_.mu(z.cell_index), tau));
    counts_[c] += y;
    exposure_[c] += tau;
    round_counts_[c] += y;
    round_exposure_[c] += tau;
    return;
  }
  const bool on_path = z.cell_index < columns_.size() &&
                       z.position == env_.grid().sensing_position(z.cell_index);
  const Eigen::VectorXd h =
      on_path ? columns_[z.cell_index] : sensitivity_column(config_.model, env_.grid(), z);
  const double rate = h.dot(env_.mu());
  const long m = std::max(1L, std::lround(tau / config_.measurement_interval));
  const double dt = tau / static_cast<double>(m);
  double sum_w2 = 0.0;
  double sum_w2y = 0.0;
  for (long i = 0; i < m; ++i) {
    const auto y = static_cast<double>(sample_counts(rng, rate, dt));
    const double w = row_weight(y, config_.bias_b, config_.weighting);
    sum_w2 += w * w;
    sum_w2y += w * w * y;
  }
  // Each sub-interval regresses y on dt * h.
  estimator_->update_batch(h, dt * dt * sum_w2, dt * sum_w2y, m);
  posterior_.reset();
}

const PosteriorSummary<double>& Survey::posterior() {
  if (!posterior_) posterior_ = estimator_->solve();
  return *posterior_;
}

IntervalTable Survey::intervals(const CellSet& cells, double delta_i) {
  IntervalTable table(env_.size());
  if (config_.intervals == IntervalSource::kOracle) {
    for (CellIndex x : cells) table.set(x, {env_.mu(x), env_.mu(x)});
    return table;
  }
  if (pointwise_) {
    const Eigen::VectorXd& n = fresh_ ? round_counts_ : counts_;
    const Eigen::VectorXd& t = fresh_ ? round_exposure_ : exposure_;
    for (CellIndex x : cells) {
      const auto i = static_cast<Eigen::Index>(x);
      require(t[i] > 0, ErrorCode::kInvalidState, "cell has no exposure");
      table.set(x, pointwise_interval(n[i], t[i], delta_i));
    }
    return table;
  }
  const auto& post = posterior();
  const double z = config_.width.z(delta_i);
  for (CellIndex x : cells) {
    const auto i = static_cast<Eigen::Index>(x);
    table.set(x, gaussian_interval(post.mu_hat_raw[i], post.sigma_diag[i], z));
  }
  return table;
}

Eigen::VectorXd Survey::estimate() {
  if (!pointwise_) return posterior().mu_hat;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(counts_.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (exposure_[i] > 0) out[i] = counts_[i] / exposure_[i];
  }
  return out;
}

ErrorSample Survey::error_sample(double t, const CellSet& sources) {
  const Eigen::VectorXd est = estimate();
  ErrorSample s;
  s.t = t;
  s.grid_error = (est - env_.mu()).norm();
  for (CellIndex x : sources) {
    const auto i = static_cast<Eigen::Index>(x);
    s.source_error = std::max(s.source_error, std::abs(est[i] - env_.mu()[i]));
  }
  return s;
}

namespace {

/// S*(k) when defined, else the k largest by index order (error metric only).
CellSet metric_sources(const EnvironmentMap& env) {
  if (env.identifiable()) return true_top_k(env);
  CellSet order = all_cells(env.size());
  std::stable_sort(order.begin(), order.end(),
                   [&](CellIndex a, CellIndex b) { return env.mu(a) > env.mu(b); });
  order.resize(env.k());
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

TrialReport run_adasearch(const EnvironmentMap& env, const SearchConfig& config, RngSeed seed,
                          const RoundObserver& observer) {
  config.validate();
  if (std::holds_alternative<ExactRule>(config.rule)) {
    require(env.identifiable(), ErrorCode::kNonIdentifiable,
            "exact termination needs a unique top-k set");
  }
  const RasterPath path = raster_path(env.grid());
  const CellSet sources = metric_sources(env);
  Survey survey(env, config, seed);
  EliminationState state =
      EliminationState::initial(env.size(), env.k(), config.tau_0, config.delta_total);

  TrialReport report;
  report.algorithm = "adasearch";
  const bool fresh = config.accumulation == PointwiseAccumulation::kFresh;
  for (int r = 0; r < config.max_rounds; ++r) {
    state.round = r;
    const DwellSchedule schedule =
        round_schedule(path, state.candidates, config.tau_0, state.tau, r);
    survey.begin_round(fresh);
    for (std::size_t s = 0; s < path.configs.size(); ++s) {
      survey.dwell(r, s, path.configs[s], schedule.dwell[s]);
    }
    report.sim_runtime += schedule.total_time;
    report.sample_time += schedule.sample_time;

    const double delta_i = round_delta(config.delta_total, env.size(), r + 1);
    const IntervalTable intervals = survey.intervals(state.candidates, delta_i);
    const CellSet confirmed = top_elim(state, intervals);
    const CellSet candidates = bot_elim(state, intervals, confirmed);
    if (observer) observer({state, intervals, confirmed, candidates, delta_i});

    report.log.push_back({r, state.candidates.size(), state.confirmed.size(), state.tau, delta_i,
                          report.sim_runtime, report.sample_time});
    report.errors.push_back(survey.error_sample(report.sim_runtime, sources));
    report.rounds = r + 1;

    state.confirmed = confirmed;
    state.candidates = candidates;
    const TerminationDecision decision = check_termination(state, intervals, config.rule);
    if (decision.done) {
      report.terminated = true;
      report.returned = decision.returned;
      score_report(report, env);
      return report;
    }
    state.tau *= config.dwell_growth;
  }
  report.returned = set_union(state.confirmed, state.candidates);
  report.diagnostic = "no termination within max_rounds=" + std::to_string(config.max_rounds);
  score_report(report, env);
  return report;
}

void score_report(TrialReport& report, const EnvironmentMap& env) {
  report.correct = report.terminated && env.identifiable() && report.returned == true_top_k(env);
}

bool is_eps_correct(const CellSet& returned, const EnvironmentMap& env, double eps) {
  if (!env.identifiable()) return false;
  const CellSet top = true_top_k(env);
  if (!std::includes(returned.begin(), returned.end(), top.begin(), top.end())) return false;
  const double floor = env.kth_largest(env.k()) - eps;
  return std::all_of(returned.begin(), returned.end(),
                     [&](CellIndex x) { return x < env.size() && env.mu(x) >= floor; });
}

void write_round_log_csv(std::ostream& out, const TrialReport& report) {
  out.precision(17);
  out << "round,candidates,confirmed,tau,delta_i,sim_time,sample_time\n";
  for (const auto& e : report.log) {
    out << e.round << ',' << e.candidates << ',' << e.confirmed << ',' << e.tau << ','
        << e.delta_i << ',' << e.sim_time << ',' << e.sample_time << '\n';
  }
}

}  // namespace adasearch
