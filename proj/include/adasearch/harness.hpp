#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "adasearch/baselines.hpp"
#include "adasearch/complexity.hpp"
#include "adasearch/core.hpp"

namespace adasearch {

enum class Algorithm { kAdaSearch, kNaiveSearch, kNaiveSearchDoubling, kInfoMax };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// One point of the sweep (mu_bar x k x extent).
struct SuitePoint {
  std::string id;
  double mu_bar = 0.0;
  std::size_t k = 1;
  double extent = 0.0;  // side length of the grid in meters
};

struct SuiteConfig {
  std::string name = "suite";
  std::uint64_t seed = 1;
  int trials = 1;
  int parallel = 1;

  GridSpec grid;
  std::vector<double> mu_bars{400.0};
  std::vector<std::size_t> ks{1};
  std::vector<double> extents;  // empty means rows * cell_size
  double mu_star = 800.0;
  double source_lo = 800.0;
  double source_hi = 1000.0;
  std::optional<std::vector<double>> rates;  // explicit field, no random env

  std::vector<Algorithm> algorithms{Algorithm::kAdaSearch};
  SearchConfig search;
  InfoMaxConfig infomax;
  int infomax_restarts = 64;
  int max_passes = 5000;

  nlohmann::json source;  // the config as read

  std::vector<SuitePoint> points() const;
  void validate() const;
};

/// Reads a suite from JSON; unknown keys are rejected as invalid-config.
SuiteConfig parse_suite_config(const nlohmann::json& j);
SuiteConfig load_suite_config(const std::filesystem::path& path);

/// Source rates for k sources: mu_star when k = 1, otherwise evenly spaced
/// over [source_lo, source_hi].
std::vector<double> source_rates(const SuiteConfig& config, std::size_t k);

GridSpec grid_for(const SuiteConfig& config, const SuitePoint& point);

/// Environment of trial `trial` at `point`. Shared by every algorithm.
EnvironmentMap trial_environment(const SuiteConfig& config, const SuitePoint& point, int trial);

std::uint64_t trial_seed(const SuiteConfig& config, int trial);

TrialReport run_trial(const SuiteConfig& config, Algorithm algorithm, const EnvironmentMap& env,
                      RngSeed seed);

struct TrialRecord {
  SuitePoint point;
  Algorithm algorithm = Algorithm::kAdaSearch;
  int trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t env_hash = 0;
  double mu_star = 0.0;
  double c_adapt = 0.0;
  double c_unif = 0.0;
  bool eps_correct = false;
  TrialReport report;
};

struct SuiteResult {
  SuiteConfig config;
  std::vector<TrialRecord> trials;  // ordered by point, trial, algorithm
  double wall_seconds = 0.0;
};

SuiteResult run_suite(const SuiteConfig& config);

struct Stats {
  double mean = 0.0, std = 0.0, min = 0.0, max = 0.0;
};
Stats stats_of(const std::vector<double>& v);

struct AggregateRow {
  SuitePoint point;
  Algorithm algorithm = Algorithm::kAdaSearch;
  std::size_t n = 0;
  std::size_t terminated = 0;
  std::size_t correct = 0;
  Stats runtime, sample_time, rounds, source_error, grid_error;
};

std::vector<AggregateRow> aggregate(const SuiteResult& result);

struct PlotData {
  std::string envelopes_csv;
  std::string ratio_csv;
};

/// Min/mean/max error envelopes over trials, and the naive-to-adaptive
/// sample-time ratio per sweep point with the theory overlay.
PlotData plot_data(const SuiteResult& result);

std::string trials_csv(const SuiteResult& result);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);
std::string rounds_csv(const SuiteResult& result);
std::string timeseries_csv(const SuiteResult& result);
nlohmann::json summary_json(const SuiteResult& result, const std::vector<AggregateRow>& rows);

/// Writes every CSV and summary.json into dir (created if missing).
void write_outputs(const SuiteResult& result, const std::filesystem::path& dir);

}  // namespace adasearch
