#include "adasearch/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "adasearch/error.hpp"

namespace adasearch {

namespace {

CellSet every_cell(std::size_t n) {
  CellSet s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return s;
}

CellSet sources_for_metrics(const EnvironmentMap& env) {
  if (env.identifiable()) return true_top_k(env);
  CellSet order = every_cell(env.size());
  std::stable_sort(order.begin(), order.end(),
                   [&](CellIndex a, CellIndex b) { return env.mu(a) > env.mu(b); });
  order.resize(env.k());
  std::sort(order.begin(), order.end());
  return order;
}

void require_exact_identifiable(const EnvironmentMap& env, const SearchConfig& config) {
  if (std::holds_alternative<ExactRule>(config.rule)) {
    require(env.identifiable(), ErrorCode::kNonIdentifiable,
            "exact termination needs a unique top-k set");
  }
}

/// Best guess when a run is cut off: top k by estimate.
CellSet top_k_by(const Eigen::VectorXd& v, std::size_t k) {
  CellSet order = every_cell(static_cast<std::size_t>(v.size()));
  std::stable_sort(order.begin(), order.end(), [&](CellIndex a, CellIndex b) {
    return v[static_cast<Eigen::Index>(a)] > v[static_cast<Eigen::Index>(b)];
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

TrialReport run_naivesearch(const EnvironmentMap& env, const SearchConfig& config, NaiveMode mode,
                            RngSeed seed, int max_passes) {
  config.validate();
  require_exact_identifiable(env, config);
  const bool doubling = mode == NaiveMode::kDoubling;
  const int limit = doubling ? config.max_rounds : max_passes;
  require(limit >= 1, ErrorCode::kInvalidConfig, "pass limit must be >= 1");

  const RasterPath path = raster_path(env.grid());
  const CellSet cells = every_cell(env.size());
  const CellSet sources = sources_for_metrics(env);
  const auto n = static_cast<double>(env.size());
  Survey survey(env, config, seed);

  TrialReport report;
  report.algorithm = doubling ? "naivesearch-doubling" : "naivesearch";
  double tau = config.tau_0;
  for (int p = 0; p < limit; ++p) {
    survey.begin_round(doubling);
    for (std::size_t s = 0; s < path.configs.size(); ++s) survey.dwell(p, s, path.configs[s], tau);
    report.sim_runtime += tau * n;
    report.sample_time += tau * n;

    const double delta_i = round_delta(config.delta_total, env.size(), p + 1);
    const IntervalTable intervals = survey.intervals(cells, delta_i);
    report.log.push_back({p, env.size(), 0, tau, delta_i, report.sim_runtime, report.sample_time});
    report.errors.push_back(survey.error_sample(report.sim_runtime, sources));
    report.rounds = p + 1;

    const TerminationDecision decision = check_termination(intervals, env.k(), config.rule);
    if (decision.done) {
      report.terminated = true;
      report.returned = decision.returned;
      score_report(report, env);
      return report;
    }
    if (doubling) tau *= config.dwell_growth;
  }
  report.returned = top_k_by(survey.estimate(), env.k());
  report.diagnostic = "no termination within " + std::to_string(limit) + " passes";
  score_report(report, env);
  return report;
}

bool FlightBox::contains(const Eigen::Vector3d& p, double tol) const {
  return (p.array() >= lo.array() - tol).all() && (p.array() <= hi.array() + tol).all();
}

Eigen::Vector3d FlightBox::clamp(const Eigen::Vector3d& p) const {
  return p.cwiseMax(lo).cwiseMin(hi);
}

FlightBox flight_box(const GridSpec& grid, double height) {
  require(height >= 0, ErrorCode::kInvalidConfig, "box height must be >= 0");
  FlightBox box;
  box.lo = {grid.origin.x(), grid.origin.y(), grid.sensor_altitude};
  box.hi = {grid.origin.x() + static_cast<double>(grid.cols) * grid.cell_size,
            grid.origin.y() + static_cast<double>(grid.rows) * grid.cell_size,
            grid.sensor_altitude + height};
  return box;
}

Eigen::Vector3d BezierTrajectory::at(double s) const {
  const double u = 1.0 - s;
  return u * u * control_points[0] + 2.0 * u * s * control_points[1] +
         s * s * control_points[2];
}

double BezierTrajectory::arc_length(int segments) const {
  double len = 0.0;
  Eigen::Vector3d prev = at(0.0);
  for (int i = 1; i <= segments; ++i) {
    const Eigen::Vector3d next = at(static_cast<double>(i) / segments);
    len += (next - prev).norm();
    prev = next;
  }
  return len;
}

double infomax_objective(const Eigen::VectorXd& sigma_diag, const SensitivityModel& model,
                         const GridSpec& grid, const BezierTrajectory& traj, int n_samples,
                         const FlightBox& box) {
  require(n_samples >= 1, ErrorCode::kInvalidArgument, "need at least one sample");
  require(static_cast<std::size_t>(sigma_diag.size()) == grid.size(),
          ErrorCode::kDimensionMismatch, "variance vector length must equal |S|");
  for (const auto& p : traj.control_points) {
    require(box.contains(p), ErrorCode::kInvalidArgument, "trajectory leaves the flight box");
  }
  double score = 0.0;
  for (int i = 1; i <= n_samples; ++i) {
    SensingConfig z;
    z.position = traj.at(static_cast<double>(i) / n_samples);
    z.cell_index = grid.nearest_cell(z.position);
    score += sigma_diag.dot(sensitivity_column(model, grid, z));
  }
  return score;
}

TrajectoryOptimizer random_restart_optimizer(int restarts, int refine_sweeps) {
  require(restarts >= 0 && refine_sweeps >= 0, ErrorCode::kInvalidConfig,
          "optimizer budgets must be >= 0");
  return [restarts, refine_sweeps](const PlanningProblem& problem, Rng& rng) {
    const FlightBox& box = problem.box;
    auto feasible = [&](const BezierTrajectory& t) {
      return t.arc_length() <= problem.max_length + 1e-9;
    };
    BezierTrajectory best{{problem.start, problem.start, problem.start}, problem.duration};
    double best_score = problem.score(best);
    auto draw = [&] {
      Eigen::Vector3d p;
      for (int a = 0; a < 3; ++a) p[a] = box.lo[a] + (box.hi[a] - box.lo[a]) * uniform01(rng);
      return p;
    };
    for (int r = 0; r < restarts; ++r) {
      BezierTrajectory t{{problem.start, draw(), draw()}, problem.duration};
      if (!feasible(t)) continue;
      const double s = problem.score(t);
      if (s > best_score) {
        best = t;
        best_score = s;
      }
    }
    double step = (box.hi - box.lo).head<2>().maxCoeff() / 4.0;
    const double min_step = step / 64.0;
    for (int sweep = 0; sweep < refine_sweeps && step >= min_step; ++sweep) {
      bool improved = false;
      for (int cp = 1; cp <= 2; ++cp) {
        for (int a = 0; a < 3; ++a) {
          for (double sign : {1.0, -1.0}) {
            BezierTrajectory t = best;
            t.control_points[cp][a] += sign * step;
            t.control_points[cp] = box.clamp(t.control_points[cp]);
            if (!feasible(t)) continue;
            const double s = problem.score(t);
            if (s > best_score) {
              best = t;
              best_score = s;
              improved = true;
            }
          }
        }
      }
      if (!improved) step /= 2.0;
    }
    return best;
  };
}

void InfoMaxConfig::validate() const {
  require(t_plan > 0, ErrorCode::kInvalidConfig, "t_plan must be > 0");
  require(n_samples >= 2, ErrorCode::kInvalidConfig, "n_samples must be >= 2");
  require(box_height >= 0, ErrorCode::kInvalidConfig, "box height must be >= 0");
  require(max_time > 0, ErrorCode::kInvalidConfig, "max_time must be > 0");
  require(prior_precision >= 0, ErrorCode::kInvalidConfig, "prior precision must be >= 0");
}

TrialReport run_infomax(const EnvironmentMap& env, const SearchConfig& config,
                        const InfoMaxConfig& infomax, RngSeed seed,
                        std::vector<FlightLeg>* flight) {
  config.validate();
  infomax.validate();
  require(!is_pointwise(config.model), ErrorCode::kInvalidConfig,
          "InfoMax needs the inverse-square model");
  require_exact_identifiable(env, config);

  const GridSpec& grid = env.grid();
  const FlightBox box = flight_box(grid, infomax.box_height);
  const double v_max = infomax.v_max > 0 ? infomax.v_max : grid.cell_size / config.tau_0;
  const TrajectoryOptimizer optimize =
      infomax.optimizer ? infomax.optimizer : random_restart_optimizer();
  const CellSet sources = sources_for_metrics(env);
  const auto n = static_cast<Eigen::Index>(env.size());
  const long per_leg = std::max(1L, std::lround(infomax.t_plan / config.measurement_interval));
  const double dt = infomax.t_plan / static_cast<double>(per_leg);

  EstimatorState<double> estimator(n, config.bias_b);
  estimator.add_prior_precision(infomax.prior_precision);
  PosteriorSummary<double> posterior = estimator.solve();
  Eigen::Vector3d position = grid.sensing_position(0);

  TrialReport report;
  report.algorithm = "infomax";
  for (int cycle = 0; report.sim_runtime < infomax.max_time; ++cycle) {
    PlanningProblem problem;
    problem.box = box;
    problem.start = position;
    problem.duration = infomax.t_plan;
    problem.max_length = v_max * infomax.t_plan;
    problem.score = [&](const BezierTrajectory& t) {
      return infomax_objective(posterior.sigma_diag, config.model, grid, t, infomax.n_samples,
                               box);
    };
    Rng planner_rng = make_rng(seed.value, {stream::kPlanner, static_cast<std::uint64_t>(cycle)});
    const BezierTrajectory leg = optimize(problem, planner_rng);
    if (flight) flight->push_back({cycle, leg});

    Rng rng = make_rng(seed.value,
                       {stream::kInfoMaxMeasurement, static_cast<std::uint64_t>(cycle)});
    for (long m = 0; m < per_leg; ++m) {
      SensingConfig z;
      z.position = leg.at((static_cast<double>(m) + 0.5) / static_cast<double>(per_leg));
      z.cell_index = grid.nearest_cell(z.position);
      const Eigen::VectorXd h = sensitivity_column(config.model, grid, z);
      const auto y = static_cast<double>(sample_counts(rng, h.dot(env.mu()), dt));
      const double w = row_weight(y, config.bias_b, config.weighting);
      estimator.update_batch(h, dt * dt * w * w, dt * w * w * y, 1);
    }
    position = leg.at(1.0);
    report.sim_runtime += infomax.t_plan;
    report.sample_time += infomax.t_plan;
    posterior = estimator.solve();

    const double delta_i = round_delta(config.delta_total, env.size(), cycle + 1);
    const double z = config.width.z(delta_i);
    IntervalTable intervals(env.size());
    for (CellIndex x = 0; x < env.size(); ++x) {
      const auto i = static_cast<Eigen::Index>(x);
      intervals.set(x, config.intervals == IntervalSource::kOracle
                           ? Interval{env.mu(x), env.mu(x)}
                           : gaussian_interval(posterior.mu_hat_raw[i], posterior.sigma_diag[i], z));
    }
    report.log.push_back({cycle, env.size(), 0, infomax.t_plan, delta_i, report.sim_runtime,
                          report.sample_time});
    ErrorSample e;
    e.t = report.sim_runtime;
    e.grid_error = (posterior.mu_hat - env.mu()).norm();
    for (CellIndex x : sources) {
      const auto i = static_cast<Eigen::Index>(x);
      e.source_error = std::max(e.source_error, std::abs(posterior.mu_hat[i] - env.mu()[i]));
    }
    report.errors.push_back(e);
    report.rounds = cycle + 1;

    const TerminationDecision decision = check_termination(intervals, env.k(), config.rule);
    if (decision.done) {
      report.terminated = true;
      report.returned = decision.returned;
      score_report(report, env);
      return report;
    }
  }
  report.returned = top_k_by(posterior.mu_hat, env.k());
  report.diagnostic = "no termination within max_time=" + std::to_string(infomax.max_time) + " s";
  score_report(report, env);
  return report;
}

void write_trajectory_csv(std::ostream& out, const std::vector<FlightLeg>& flight, int per_leg) {
  require(per_leg >= 1, ErrorCode::kInvalidArgument, "need at least one point per leg");
  out.precision(17);
  out << "cycle,t,x,y,z\n";
  double t0 = 0.0;
  for (const auto& leg : flight) {
    for (int i = 0; i <= per_leg; ++i) {
      const double s = static_cast<double>(i) / per_leg;
      const Eigen::Vector3d p = leg.trajectory.at(s);
      out << leg.cycle << ',' << t0 + s * leg.trajectory.duration << ',' << p.x() << ','
          << p.y() << ',' << p.z() << '\n';
    }
    t0 += leg.trajectory.duration;
  }
}

}  // namespace adasearch
