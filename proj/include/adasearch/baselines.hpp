#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "adasearch/core.hpp"

namespace adasearch {

enum class NaiveMode {
  kConstantSpeed,  // tau_0 per cell every pass, cumulative data
  kDoubling,       // tau_0 * c^i per cell in pass i, fresh data each pass
};

/// `max_passes` guards the constant-speed mode; doubling uses max_rounds.
TrialReport run_naivesearch(const EnvironmentMap& env, const SearchConfig& config, NaiveMode mode,
                            RngSeed seed, int max_passes = 5000);

/// Axis-aligned region the vehicle may fly in.
struct FlightBox {
  Eigen::Vector3d lo = Eigen::Vector3d::Zero();
  Eigen::Vector3d hi = Eigen::Vector3d::Zero();

  bool contains(const Eigen::Vector3d& p, double tol = 1e-9) const;
  Eigen::Vector3d clamp(const Eigen::Vector3d& p) const;
};

/// Grid extent horizontally, [altitude, altitude + height] vertically.
FlightBox flight_box(const GridSpec& grid, double height);

/// Second-order Bezier curve flown over `duration` seconds.
struct BezierTrajectory {
  std::array<Eigen::Vector3d, 3> control_points;
  double duration = 30.0;

  /// Position at normalized time s in [0, 1].
  Eigen::Vector3d at(double s) const;
  double arc_length(int segments = 64) const;
};

/// sum_{i=1..N} sum_j sigma_jj h(x_j, xi(i / N)).
double infomax_objective(const Eigen::VectorXd& sigma_diag, const SensitivityModel& model,
                         const GridSpec& grid, const BezierTrajectory& traj, int n_samples,
                         const FlightBox& box);

struct PlanningProblem {
  std::function<double(const BezierTrajectory&)> score;
  FlightBox box;
  Eigen::Vector3d start;
  double duration = 30.0;
  double max_length = 0.0;
};

/// Returns the best feasible trajectory found; the curve starts at start.
using TrajectoryOptimizer = std::function<BezierTrajectory(const PlanningProblem&, Rng&)>;

/// Seeded random restarts followed by coordinate descent on the free
/// control points.
TrajectoryOptimizer random_restart_optimizer(int restarts = 64, int refine_sweeps = 40);

struct InfoMaxConfig {
  double t_plan = 30.0;
  int n_samples = 10;
  double box_height = 10.0;
  double v_max = 0.0;  // <= 0 means cell_size / tau_0
  double max_time = 20000.0;
  double prior_precision = 1e-6;
  TrajectoryOptimizer optimizer;  // empty means random_restart_optimizer()

  void validate() const;
};

struct FlightLeg {
  int cycle = 0;
  BezierTrajectory trajectory;
};

/// Receding-horizon information maximization. Requires the inverse-square
/// model. Planning time is not charged; each cycle adds t_plan seconds.
TrialReport run_infomax(const EnvironmentMap& env, const SearchConfig& config,
                        const InfoMaxConfig& infomax, RngSeed seed,
                        std::vector<FlightLeg>* flight = nullptr);

/// cycle,t,x,y,z sampled at `per_leg` points per leg.
void write_trajectory_csv(std::ostream& out, const std::vector<FlightLeg>& flight,
                          int per_leg = 10);

}  // namespace adasearch
