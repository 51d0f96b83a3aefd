#include "adasearch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "adasearch/error.hpp"

namespace adasearch {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join(const CellSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(s[i]);
  }
  return out;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

template <typename T>
std::vector<T> scalar_or_array(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where) {
  require(j.is_object(), ErrorCode::kInvalidConfig, std::string(where) + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : j.items()) {
    require(allowed.count(key) > 0, ErrorCode::kInvalidConfig,
            std::string("unknown key '") + key + "' in " + where);
  }
}

SensitivityModel parse_model(const json& j) {
  const std::string type = j.is_string() ? j.get<std::string>() : j.at("type").get<std::string>();
  if (j.is_object()) reject_unknown(j, {"type", "c"}, "model");
  if (type == "pointwise") return Pointwise{};
  if (type == "inverse_square") return InverseSquare{j.is_object() ? j.value("c", 1.0) : 1.0};
  throw Error(ErrorCode::kInvalidConfig, "unknown model '" + type + "'");
}

ConfidenceWidth parse_width(const json& j) {
  reject_unknown(j, {"mode", "alpha", "z"}, "confidence");
  const std::string mode = j.value("mode", std::string("quantile"));
  ConfidenceWidth w;
  if (mode == "schedule") {
    w.kind = ConfidenceWidth::Kind::kRoundSchedule;
  } else if (mode == "quantile") {
    w.kind = ConfidenceWidth::Kind::kFixedQuantile;
    w.value = j.value("alpha", 1e-4);
    require(w.value > 0 && w.value < 1, ErrorCode::kInvalidConfig, "alpha must be in (0, 1)");
  } else if (mode == "multiplier") {
    w.kind = ConfidenceWidth::Kind::kFixedMultiplier;
    w.value = j.at("z").get<double>();
  } else {
    throw Error(ErrorCode::kInvalidConfig, "unknown confidence mode '" + mode + "'");
  }
  return w;
}

TerminationRule parse_rule(const json& j) {
  reject_unknown(j, {"rule", "epsilon"}, "termination");
  const std::string rule = j.value("rule", std::string("exact"));
  if (rule == "exact") return ExactRule{};
  if (rule == "approximate") return ApproximateRule{j.at("epsilon").get<double>()};
  throw Error(ErrorCode::kInvalidConfig, "unknown termination rule '" + rule + "'");
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kAdaSearch: return "adasearch";
    case Algorithm::kNaiveSearch: return "naivesearch";
    case Algorithm::kNaiveSearchDoubling: return "naivesearch-doubling";
    case Algorithm::kInfoMax: return "infomax";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& s) {
  for (Algorithm a : {Algorithm::kAdaSearch, Algorithm::kNaiveSearch,
                      Algorithm::kNaiveSearchDoubling, Algorithm::kInfoMax}) {
    if (to_string(a) == s) return a;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown algorithm '" + s + "'");
}

std::vector<SuitePoint> SuiteConfig::points() const {
  std::vector<double> ext = extents;
  if (ext.empty()) ext.push_back(static_cast<double>(grid.cols) * grid.cell_size);
  std::vector<SuitePoint> out;
  for (double e : ext) {
    for (std::size_t k : ks) {
      for (double m : mu_bars) {
        SuitePoint p{"", m, k, e};
        p.id = "mu_bar=" + num(m) + ";k=" + std::to_string(k) + ";extent=" + num(e);
        out.push_back(p);
      }
    }
  }
  return out;
}

void SuiteConfig::validate() const {
  require(trials >= 1, ErrorCode::kInvalidConfig, "trials must be >= 1");
  require(parallel >= 1, ErrorCode::kInvalidConfig, "parallel must be >= 1");
  require(!algorithms.empty(), ErrorCode::kInvalidConfig, "need at least one algorithm");
  require(!mu_bars.empty() && !ks.empty(), ErrorCode::kInvalidConfig, "empty sweep axis");
  grid.validate();
  search.validate();
  infomax.validate();
  for (double e : extents) require(e > 0, ErrorCode::kInvalidConfig, "extent must be > 0");
  for (std::size_t k : ks) {
    require(k >= 1 && k <= grid.size(), ErrorCode::kInvalidConfig, "k must be in [1, |S|]");
  }
  if (rates) {
    require(rates->size() == grid.size(), ErrorCode::kDimensionMismatch,
            "rates must have rows * cols entries");
  } else {
    for (std::size_t k : ks) {
      for (double m : mu_bars) {
        const auto r = source_rates(*this, k);
        require(k == grid.size() || *std::min_element(r.begin(), r.end()) > m,
                ErrorCode::kNonIdentifiable, "every source rate must exceed mu_bar");
      }
    }
  }
  for (Algorithm a : algorithms) {
    if (a == Algorithm::kInfoMax) {
      require(!is_pointwise(search.model), ErrorCode::kInvalidConfig,
              "infomax needs the inverse_square model");
    }
  }
}

SuiteConfig parse_suite_config(const json& j) {
  reject_unknown(j, {"name", "seed", "trials", "parallel", "grid", "mu_bar", "k", "extent",
                     "mu_star", "source_range", "rates", "algorithms", "model", "delta_total",
                     "confidence", "tau_0", "dwell_growth", "measurement_interval", "bias_b",
                     "weighting", "accumulation", "interval_source", "termination", "max_rounds",
                     "max_passes", "infomax"},
                 "config");
  SuiteConfig c;
  try {
    c.source = j;
    c.name = j.value("name", c.name);
    c.seed = j.value("seed", c.seed);
    c.trials = j.value("trials", c.trials);
    c.parallel = j.value("parallel", c.parallel);
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      reject_unknown(g, {"rows", "cols", "cell_size", "extent", "origin", "sensor_altitude"},
                     "grid");
      json base = g;
      base.erase("extent");
      c.grid = grid_from_json(base);
      if (g.contains("extent")) {
        c.grid.cell_size = g.at("extent").get<double>() / static_cast<double>(c.grid.cols);
      }
    } else {
      c.grid.rows = c.grid.cols = 16;
      c.grid.cell_size = 4.0;
    }
    if (j.contains("mu_bar")) c.mu_bars = scalar_or_array<double>(j.at("mu_bar"));
    if (j.contains("k")) c.ks = scalar_or_array<std::size_t>(j.at("k"));
    if (j.contains("extent")) c.extents = scalar_or_array<double>(j.at("extent"));
    c.mu_star = j.value("mu_star", c.mu_star);
    if (j.contains("source_range")) {
      const auto r = j.at("source_range").get<std::vector<double>>();
      require(r.size() == 2 && r[0] <= r[1], ErrorCode::kInvalidConfig,
              "source_range must be [lo, hi]");
      c.source_lo = r[0];
      c.source_hi = r[1];
    }
    if (j.contains("rates")) c.rates = j.at("rates").get<std::vector<double>>();
    if (j.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : j.at("algorithms")) c.algorithms.push_back(algorithm_from_string(a));
    }
    SearchConfig& s = c.search;
    if (j.contains("model")) s.model = parse_model(j.at("model"));
    s.delta_total = j.value("delta_total", s.delta_total);
    if (j.contains("confidence")) s.width = parse_width(j.at("confidence"));
    s.tau_0 = j.value("tau_0", s.tau_0);
    s.dwell_growth = j.value("dwell_growth", s.dwell_growth);
    s.measurement_interval = j.value("measurement_interval", s.tau_0);
    s.bias_b = j.value("bias_b", s.bias_b);
    const std::string weighting = j.value("weighting", std::string("inverse_sqrt_count"));
    require(weighting == "inverse_sqrt_count" || weighting == "inverse_count",
            ErrorCode::kInvalidConfig, "weighting must be inverse_sqrt_count or inverse_count");
    s.weighting = weighting == "inverse_count" ? RowWeighting::kInverseCount
                                               : RowWeighting::kInverseSqrtCount;
    const std::string acc = j.value("accumulation", std::string("cumulative"));
    require(acc == "cumulative" || acc == "fresh", ErrorCode::kInvalidConfig,
            "accumulation must be cumulative or fresh");
    s.accumulation =
        acc == "fresh" ? PointwiseAccumulation::kFresh : PointwiseAccumulation::kCumulative;
    const std::string src = j.value("interval_source", std::string("empirical"));
    require(src == "empirical" || src == "oracle", ErrorCode::kInvalidConfig,
            "interval_source must be empirical or oracle");
    s.intervals = src == "oracle" ? IntervalSource::kOracle : IntervalSource::kEmpirical;
    if (j.contains("termination")) s.rule = parse_rule(j.at("termination"));
    s.max_rounds = j.value("max_rounds", s.max_rounds);
    c.max_passes = j.value("max_passes", c.max_passes);
    if (j.contains("infomax")) {
      const json& im = j.at("infomax");
      reject_unknown(im, {"t_plan", "n_samples", "box_height", "v_max", "max_time",
                          "prior_precision", "restarts"},
                     "infomax");
      c.infomax.t_plan = im.value("t_plan", c.infomax.t_plan);
      c.infomax.n_samples = im.value("n_samples", c.infomax.n_samples);
      c.infomax.box_height = im.value("box_height", c.infomax.box_height);
      c.infomax.v_max = im.value("v_max", c.infomax.v_max);
      c.infomax.max_time = im.value("max_time", c.infomax.max_time);
      c.infomax.prior_precision = im.value("prior_precision", c.infomax.prior_precision);
      c.infomax_restarts = im.value("restarts", c.infomax_restarts);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  c.infomax.optimizer = random_restart_optimizer(c.infomax_restarts);
  c.validate();
  return c;
}

SuiteConfig load_suite_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kInvalidConfig, "cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  return parse_suite_config(j);
}

std::vector<double> source_rates(const SuiteConfig& config, std::size_t k) {
  if (k == 1) return {config.mu_star};
  std::vector<double> r(k);
  for (std::size_t i = 0; i < k; ++i) {
    r[i] = config.source_lo + (config.source_hi - config.source_lo) * static_cast<double>(i) /
                                  static_cast<double>(k - 1);
  }
  return r;
}

GridSpec grid_for(const SuiteConfig& config, const SuitePoint& point) {
  GridSpec g = config.grid;
  g.cell_size = point.extent / static_cast<double>(g.cols);
  return g;
}

std::uint64_t trial_seed(const SuiteConfig& config, int trial) {
  return derive_seed(config.seed, {static_cast<std::uint64_t>(trial)});
}

EnvironmentMap trial_environment(const SuiteConfig& config, const SuitePoint& point, int trial) {
  const GridSpec grid = grid_for(config, point);
  const std::uint64_t seed = trial_seed(config, trial);
  if (config.rates) {
    return EnvironmentMap(grid,
                          Eigen::Map<const Eigen::VectorXd>(
                              config.rates->data(), static_cast<Eigen::Index>(config.rates->size())),
                          point.k, seed);
  }
  return build_random_env(RngSeed{seed}, grid, point.k, source_rates(config, point.k),
                          point.mu_bar);
}

TrialReport run_trial(const SuiteConfig& config, Algorithm algorithm, const EnvironmentMap& env,
                      RngSeed seed) {
  SearchConfig search = config.search;
  switch (algorithm) {
    case Algorithm::kAdaSearch: return run_adasearch(env, search, seed);
    case Algorithm::kNaiveSearch:
      return run_naivesearch(env, search, NaiveMode::kConstantSpeed, seed, config.max_passes);
    case Algorithm::kNaiveSearchDoubling:
      return run_naivesearch(env, search, NaiveMode::kDoubling, seed, config.max_passes);
    case Algorithm::kInfoMax: return run_infomax(env, search, config.infomax, seed);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown algorithm");
}

SuiteResult run_suite(const SuiteConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<SuitePoint> points = config.points();
  const std::size_t n_tasks = points.size() * static_cast<std::size_t>(config.trials);
  const std::size_t n_alg = config.algorithms.size();

  SuiteResult result;
  result.config = config;
  result.trials.resize(n_tasks * n_alg);

  auto run_task = [&](std::size_t task) {
    const SuitePoint& point = points[task / static_cast<std::size_t>(config.trials)];
    const int trial = static_cast<int>(task % static_cast<std::size_t>(config.trials));
    const std::uint64_t seed = trial_seed(config, trial);
    std::optional<EnvironmentMap> env;
    std::string env_error;
    try {
      env.emplace(trial_environment(config, point, trial));
    } catch (const Error& e) {
      env_error = e.what();
    }
    double c_adapt = std::nan(""), c_unif = std::nan("");
    if (env && env->identifiable()) {
      ComplexityOptions opt;
      opt.tau_0 = config.search.tau_0;
      opt.delta_total = config.search.delta_total;
      const ComplexityReport cr = complexity_terms(*env, opt);
      c_adapt = cr.c_adapt;
      c_unif = cr.c_unif;
    }
    for (std::size_t a = 0; a < n_alg; ++a) {
      TrialRecord& rec = result.trials[task * n_alg + a];
      rec.point = point;
      rec.algorithm = config.algorithms[a];
      rec.trial = trial;
      rec.seed = seed;
      rec.c_adapt = c_adapt;
      rec.c_unif = c_unif;
      rec.report.algorithm = to_string(rec.algorithm);
      if (!env) {
        rec.report.diagnostic = env_error;
        continue;
      }
      rec.env_hash = env_hash(*env);
      rec.mu_star = env->kth_largest(env->k());
      try {
        rec.report = run_trial(config, rec.algorithm, *env, RngSeed{seed});
      } catch (const Error& e) {
        rec.report.diagnostic = e.what();
      }
      if (const auto* approx = std::get_if<ApproximateRule>(&config.search.rule)) {
        rec.eps_correct =
            rec.report.terminated && is_eps_correct(rec.report.returned, *env, approx->epsilon);
      } else {
        rec.eps_correct = rec.report.correct;
      }
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(config.parallel), std::max<std::size_t>(n_tasks, 1));
  if (workers <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < n_tasks; t = next++) run_task(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

Stats stats_of(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return {std::nan(""), std::nan(""), std::nan(""), std::nan("")};
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return s;
}

std::vector<AggregateRow> aggregate(const SuiteResult& result) {
  std::vector<AggregateRow> rows;
  for (const SuitePoint& p : result.config.points()) {
    for (Algorithm a : result.config.algorithms) {
      AggregateRow row;
      row.point = p;
      row.algorithm = a;
      std::vector<double> rt, st, rd, se, ge;
      for (const auto& t : result.trials) {
        if (t.point.id != p.id || t.algorithm != a) continue;
        ++row.n;
        row.terminated += t.report.terminated;
        row.correct += t.report.correct;
        rt.push_back(t.report.sim_runtime);
        st.push_back(t.report.sample_time);
        rd.push_back(t.report.rounds);
        if (!t.report.errors.empty()) {
          se.push_back(t.report.errors.back().source_error);
          ge.push_back(t.report.errors.back().grid_error);
        }
      }
      row.runtime = stats_of(rt);
      row.sample_time = stats_of(st);
      row.rounds = stats_of(rd);
      row.source_error = stats_of(se);
      row.grid_error = stats_of(ge);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string trials_csv(const SuiteResult& result) {
  std::ostringstream o;
  o << "point,algorithm,mu_bar,k,extent,trial,seed,env_hash,terminated,correct,eps_correct,"
       "rounds,sim_runtime,sample_time,c_adapt,c_unif,returned,diagnostic\n";
  for (const auto& t : result.trials) {
    o << quoted(t.point.id) << ',' << to_string(t.algorithm) << ',' << num(t.point.mu_bar) << ','
      << t.point.k << ',' << num(t.point.extent) << ',' << t.trial << ',' << t.seed << ','
      << t.env_hash << ',' << t.report.terminated << ',' << t.report.correct << ','
      << t.eps_correct << ',' << t.report.rounds << ',' << num(t.report.sim_runtime) << ','
      << num(t.report.sample_time) << ',' << num(t.c_adapt) << ',' << num(t.c_unif) << ','
      << quoted(join(t.report.returned)) << ',' << quoted(t.report.diagnostic) << '\n';
  }
  return o.str();
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream o;
  o << "point,algorithm,mu_bar,k,extent,n,terminated,correct";
  for (const char* m : {"runtime", "sample_time", "rounds", "source_error", "grid_error"}) {
    for (const char* s : {"mean", "std", "min", "max"}) o << ',' << m << '_' << s;
  }
  o << '\n';
  for (const auto& r : rows) {
    o << quoted(r.point.id) << ',' << to_string(r.algorithm) << ',' << num(r.point.mu_bar) << ','
      << r.point.k << ',' << num(r.point.extent) << ',' << r.n << ',' << r.terminated << ','
      << r.correct;
    for (const Stats* s : {&r.runtime, &r.sample_time, &r.rounds, &r.source_error, &r.grid_error}) {
      o << ',' << num(s->mean) << ',' << num(s->std) << ',' << num(s->min) << ',' << num(s->max);
    }
    o << '\n';
  }
  return o.str();
}

std::string rounds_csv(const SuiteResult& result) {
  std::ostringstream o;
  o << "point,algorithm,trial,round,candidates,confirmed,tau,delta_i,sim_time,sample_time\n";
  for (const auto& t : result.trials) {
    for (const auto& e : t.report.log) {
      o << quoted(t.point.id) << ',' << to_string(t.algorithm) << ',' << t.trial << ','
        << e.round << ',' << e.candidates << ',' << e.confirmed << ',' << num(e.tau) << ','
        << num(e.delta_i) << ',' << num(e.sim_time) << ',' << num(e.sample_time) << '\n';
    }
  }
  return o.str();
}

std::string timeseries_csv(const SuiteResult& result) {
  std::ostringstream o;
  o << "point,algorithm,trial,t,source_error,grid_error\n";
  for (const auto& t : result.trials) {
    for (const auto& e : t.report.errors) {
      o << quoted(t.point.id) << ',' << to_string(t.algorithm) << ',' << t.trial << ','
        << num(e.t) << ',' << num(e.source_error) << ',' << num(e.grid_error) << '\n';
    }
  }
  return o.str();
}

PlotData plot_data(const SuiteResult& result) {
  require(!result.trials.empty(), ErrorCode::kInvalidArgument, "empty aggregate");
  PlotData out;
  std::ostringstream env;
  env << "point,algorithm,t,n,source_min,source_mean,source_max,grid_min,grid_mean,grid_max\n";
  for (const SuitePoint& p : result.config.points()) {
    for (Algorithm a : result.config.algorithms) {
      std::vector<const TrialRecord*> group;
      std::set<double> times;
      for (const auto& t : result.trials) {
        if (t.point.id != p.id || t.algorithm != a || t.report.errors.empty()) continue;
        group.push_back(&t);
        for (const auto& e : t.report.errors) times.insert(e.t);
      }
      for (double time : times) {
        std::vector<double> src, grd;
        for (const TrialRecord* t : group) {
          const ErrorSample* last = nullptr;
          for (const auto& e : t->report.errors) {
            if (e.t <= time) last = &e;
          }
          if (!last) continue;
          src.push_back(last->source_error);
          grd.push_back(last->grid_error);
        }
        const Stats s = stats_of(src);
        const Stats g = stats_of(grd);
        env << quoted(p.id) << ',' << to_string(a) << ',' << num(time) << ',' << src.size() << ','
            << num(s.min) << ',' << num(s.mean) << ',' << num(s.max) << ',' << num(g.min) << ','
            << num(g.mean) << ',' << num(g.max) << '\n';
      }
    }
  }
  out.envelopes_csv = env.str();

  std::ostringstream ratio;
  ratio << "point,mu_bar,mu_star,baseline,n,ratio_sample_time,ratio_runtime,reciprocal,"
           "predicted_ratio,predicted\n";
  const auto& algs = result.config.algorithms;
  const bool has_ada = std::find(algs.begin(), algs.end(), Algorithm::kAdaSearch) != algs.end();
  for (const SuitePoint& p : result.config.points()) {
    if (!has_ada) break;
    for (Algorithm base : algs) {
      if (base == Algorithm::kAdaSearch) continue;
      std::map<int, const TrialRecord*> ada;
      for (const auto& t : result.trials) {
        if (t.point.id == p.id && t.algorithm == Algorithm::kAdaSearch) ada[t.trial] = &t;
      }
      std::vector<double> rs, rr;
      double mu_star = 0.0;
      for (const auto& t : result.trials) {
        if (t.point.id != p.id || t.algorithm != base) continue;
        const auto it = ada.find(t.trial);
        if (it == ada.end() || it->second->report.sample_time <= 0) continue;
        rs.push_back(t.report.sample_time / it->second->report.sample_time);
        rr.push_back(t.report.sim_runtime / it->second->report.sim_runtime);
        mu_star = t.mu_star;
      }
      const double m = stats_of(rs).mean;
      const bool valid = mu_star > 0 && p.mu_bar < mu_star;
      ratio << quoted(p.id) << ',' << num(p.mu_bar) << ',' << num(mu_star) << ','
            << to_string(base) << ',' << rs.size() << ',' << num(m) << ','
            << num(stats_of(rr).mean) << ',' << num(1.0 / m) << ','
            << num(valid ? predicted_ratio(p.mu_bar, mu_star) : std::nan("")) << ','
            << num(valid ? fitted_speedup(p.mu_bar, mu_star) : std::nan("")) << '\n';
    }
  }
  out.ratio_csv = ratio.str();
  return out;
}

json summary_json(const SuiteResult& result, const std::vector<AggregateRow>& rows) {
  json aggregates = json::array();
  for (const auto& r : rows) {
    aggregates.push_back({{"point", r.point.id},
                          {"algorithm", to_string(r.algorithm)},
                          {"n", r.n},
                          {"terminated", r.terminated},
                          {"correct", r.correct},
                          {"runtime_mean", r.runtime.mean},
                          {"rounds_mean", r.rounds.mean},
                          {"sample_time_mean", r.sample_time.mean}});
  }
  // Every algorithm of a trial must have seen the same environment.
  bool matched = true;
  std::map<std::pair<std::string, int>, std::uint64_t> hashes;
  std::size_t aborted = 0;
  for (const auto& t : result.trials) {
    const auto [it, inserted] = hashes.emplace(std::make_pair(t.point.id, t.trial), t.env_hash);
    if (!inserted && it->second != t.env_hash) matched = false;
    aborted += !t.report.terminated;
  }
  return {{"name", result.config.name},
          {"config", result.config.source},
          {"trial_rows", result.trials.size()},
          {"aggregate_rows", rows.size()},
          {"aborted", aborted},
          {"matched_environments", matched},
          {"aggregates", aggregates},
          {"wall_clock_seconds", result.wall_seconds}};
}

void write_outputs(const SuiteResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary);
    require(f.good(), ErrorCode::kInvalidArgument, "cannot write " + (dir / name).string());
    f << text;
  };
  const auto rows = aggregate(result);
  write("trials.csv", trials_csv(result));
  write("aggregate.csv", aggregate_csv(rows));
  write("rounds.csv", rounds_csv(result));
  write("timeseries.csv", timeseries_csv(result));
  const PlotData plots = plot_data(result);
  write("envelopes.csv", plots.envelopes_csv);
  write("ratio.csv", plots.ratio_csv);
  write("summary.json", summary_json(result, rows).dump(2) + "\n");
}

}  // namespace adasearch
