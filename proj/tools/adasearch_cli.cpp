#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>

#include <CLI11.hpp>

#include "adasearch/complexity.hpp"
#include "adasearch/error.hpp"
#include "adasearch/harness.hpp"
#include "adasearch/planner.hpp"

namespace {

using namespace adasearch;

int simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
             std::optional<int> trials, std::optional<int> parallel, const std::string& out) {
  SuiteConfig config = load_suite_config(config_path);
  if (seed) config.seed = *seed;
  if (trials) config.trials = *trials;
  if (parallel) config.parallel = *parallel;
  config.validate();
  const SuiteResult result = run_suite(config);
  write_outputs(result, out);
  std::size_t aborted = 0;
  for (const auto& t : result.trials) aborted += !t.report.terminated;
  std::cerr << "wrote " << result.trials.size() << " trial rows to " << out;
  if (aborted) std::cerr << " (" << aborted << " did not terminate)";
  std::cerr << '\n';
  return 0;
}

int theory(const std::string& config_path, int trial, std::optional<double> epsilon) {
  const SuiteConfig config = load_suite_config(config_path);
  nlohmann::json out = nlohmann::json::array();
  for (const SuitePoint& p : config.points()) {
    const EnvironmentMap env = trial_environment(config, p, trial);
    ComplexityOptions opt;
    opt.tau_0 = config.search.tau_0;
    opt.delta_total = config.search.delta_total;
    opt.epsilon = epsilon;
    if (!config.rates) opt.mu_bar = p.mu_bar;
    out.push_back({{"point", p.id},
                   {"trial", trial},
                   {"env_hash", env_hash(env)},
                   {"report", to_json(complexity_terms(env, opt))}});
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int path(const std::string& grid_text, double cell_size, double altitude,
         const std::string& out) {
  std::smatch m;
  const std::regex shape(R"((\d+)[xX](\d+))");
  require(std::regex_match(grid_text, m, shape), ErrorCode::kInvalidConfig,
          "grid must look like RxC");
  GridSpec grid;
  grid.rows = std::stoul(m[1]);
  grid.cols = std::stoul(m[2]);
  grid.cell_size = cell_size;
  grid.sensor_altitude = altitude;
  const RasterPath p = raster_path(grid);
  if (out.empty()) {
    write_path_csv(std::cout, p);
  } else {
    std::ofstream f(out);
    require(f.good(), ErrorCode::kInvalidArgument, "cannot write " + out);
    write_path_csv(f, p);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-k radioactive source seeking simulator"};
  app.require_subcommand(1);

  std::string config_path, out = "results";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials, parallel;
  auto* sim = app.add_subcommand("simulate", "Run a suite of seeded trials");
  sim->add_option("--config", config_path, "JSON suite config")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", seed, "Override the base seed");
  sim->add_option("--trials", trials, "Override trials per sweep point");
  sim->add_option("--out", out, "Output directory");
  sim->add_option("--parallel", parallel, "Worker threads");

  int trial = 0;
  std::optional<double> epsilon;
  auto* th = app.add_subcommand("theory", "Print complexity terms for each sweep point");
  th->add_option("--config", config_path, "JSON suite config")->required()->check(CLI::ExistingFile);
  th->add_option("--trial", trial, "Trial whose environment is analysed");
  th->add_option("--epsilon", epsilon, "Also report eps variants");

  std::string grid_text, path_out;
  double cell_size = 4.0, altitude = 2.0;
  auto* pa = app.add_subcommand("path", "Print the raster path as CSV");
  pa->add_option("--grid", grid_text, "Grid shape RxC")->required();
  pa->add_option("--cell-size", cell_size, "Cell side in meters");
  pa->add_option("--altitude", altitude, "Sensor altitude in meters");
  pa->add_option("--out", path_out, "Write to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sim) return simulate(config_path, seed, trials, parallel, out);
    if (*th) return theory(config_path, trial, epsilon);
    if (*pa) return path(grid_text, cell_size, altitude, path_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
