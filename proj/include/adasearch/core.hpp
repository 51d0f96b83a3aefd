#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "adasearch/confidence.hpp"
#include "adasearch/env.hpp"
#include "adasearch/estimator.hpp"
#include "adasearch/planner.hpp"
#include "adasearch/rng.hpp"
#include "adasearch/sensing.hpp"

namespace adasearch {

/// Intervals keyed by cell. Reading a cell that was never set is an
/// invalid-state error.
class IntervalTable {
 public:
  explicit IntervalTable(std::size_t n_cells = 0) : values_(n_cells), present_(n_cells, 0) {}

  std::size_t n_cells() const { return values_.size(); }
  void set(CellIndex x, Interval iv);
  bool has(CellIndex x) const { return x < present_.size() && present_[x]; }
  const Interval& at(CellIndex x) const;

 private:
  std::vector<Interval> values_;
  std::vector<char> present_;
};

struct EliminationState {
  int round = 0;
  CellSet candidates;
  CellSet confirmed;
  std::size_t k = 1;
  double tau = 1.0;
  double delta_total = 0.05;

  static EliminationState initial(std::size_t n_cells, std::size_t k, double tau_0,
                                  double delta_total);
};

struct ExactRule {};
struct ApproximateRule {
  double epsilon = 1.0;
};
using TerminationRule = std::variant<ExactRule, ApproximateRule>;

struct TerminationDecision {
  bool done = false;
  CellSet returned;
};

/// j-th largest of values, 1-based. j = 0 gives +inf, j > size gives -inf.
double kth_largest(std::vector<double> values, std::size_t j);

CellSet top_elim(const EliminationState& state, const IntervalTable& intervals);
CellSet bot_elim(const EliminationState& state, const IntervalTable& intervals,
                 const CellSet& new_confirmed);

/// Successive-elimination form: done once no candidates remain, or (under the
/// approximate rule) once the remaining candidate intervals agree within eps.
TerminationDecision check_termination(const EliminationState& state,
                                      const IntervalTable& intervals,
                                      const TerminationRule& rule);

/// Global form over every cell, used by algorithms without elimination
/// bookkeeping: done once the k-th largest LCB exceeds the (k+1)-th largest
/// UCB. The approximate rule also stops when the cells that can still be in
/// the top k agree within eps.
TerminationDecision check_termination(const IntervalTable& intervals, std::size_t k,
                                      const TerminationRule& rule);

enum class IntervalSource { kEmpirical, kOracle };
enum class PointwiseAccumulation { kCumulative, kFresh };

struct SearchConfig {
  SensitivityModel model = Pointwise{};
  double delta_total = 0.05;
  ConfidenceWidth width;  // estimator intervals only
  TerminationRule rule = ExactRule{};
  double tau_0 = 1.0;
  double dwell_growth = 2.0;
  double measurement_interval = 1.0;  // sub-interval length for the estimator
  double bias_b = 1.0;
  RowWeighting weighting = RowWeighting::kInverseSqrtCount;
  PointwiseAccumulation accumulation = PointwiseAccumulation::kCumulative;
  IntervalSource intervals = IntervalSource::kEmpirical;
  int max_rounds = 50;

  void validate() const;
};

struct RoundLogEntry {
  int round = 0;
  std::size_t candidates = 0;  // |S_i| at the start of the round
  std::size_t confirmed = 0;   // |S_top| at the start of the round
  double tau = 0.0;
  double delta_i = 0.0;
  double sim_time = 0.0;  // cumulative at the end of the round
  double sample_time = 0.0;
};

struct ErrorSample {
  double t = 0.0;
  double source_error = 0.0;  // max over S*(k) of |mu_hat - mu|
  double grid_error = 0.0;    // ||mu_hat - mu||_2
};

struct TrialReport {
  std::string algorithm;
  CellSet returned;
  bool terminated = false;
  bool correct = false;
  std::string diagnostic;
  int rounds = 0;
  double sim_runtime = 0.0;
  double sample_time = 0.0;
  std::vector<ErrorSample> errors;
  std::vector<RoundLogEntry> log;
};

/// What an observer sees after the intervals of a round are known and the
/// elimination step has been taken.
struct RoundSnapshot {
  const EliminationState& before;
  const IntervalTable& intervals;
  const CellSet& new_confirmed;
  const CellSet& new_candidates;
  double delta_i;
};

using RoundObserver = std::function<void(const RoundSnapshot&)>;

/// Measurement bookkeeping shared by the raster-based algorithms. Each dwell
/// draws from its own stream keyed by (seed, round, step), so algorithms run
/// on the same seed see common random numbers wherever their dwells match.
class Survey {
 public:
  Survey(const EnvironmentMap& env, const SearchConfig& config, RngSeed seed);

  /// Starts a new round; drops previous data when `fresh` is set.
  void begin_round(bool fresh);

  void dwell(int round, std::size_t step, const SensingConfig& z, double tau);

  /// Intervals for `cells` at confidence delta_i.
  IntervalTable intervals(const CellSet& cells, double delta_i);

  /// Current point estimate of every rate.
  Eigen::VectorXd estimate();

  ErrorSample error_sample(double t, const CellSet& sources);

 private:
  const PosteriorSummary<double>& posterior();

  const EnvironmentMap& env_;
  const SearchConfig& config_;
  RngSeed seed_;
  bool pointwise_;
  bool fresh_ = false;
  // Pointwise model: counts and exposure, over all time and in this round.
  Eigen::VectorXd counts_, exposure_, round_counts_, round_exposure_;
  std::optional<EstimatorState<double>> estimator_;
  std::optional<PosteriorSummary<double>> posterior_;
  std::vector<Eigen::VectorXd> columns_;  // h(., z) cached by cell of z
};

TrialReport run_adasearch(const EnvironmentMap& env, const SearchConfig& config, RngSeed seed,
                          const RoundObserver& observer = {});

/// Fills correct from the returned set (false when the env is not
/// identifiable or the run did not terminate).
void score_report(TrialReport& report, const EnvironmentMap& env);

/// Contains S*(k) and every member has mu >= mu^(k) - eps. False when the
/// env has no unique top-k set.
bool is_eps_correct(const CellSet& returned, const EnvironmentMap& env, double eps);

void write_round_log_csv(std::ostream& out, const TrialReport& report);

}  // namespace adasearch
