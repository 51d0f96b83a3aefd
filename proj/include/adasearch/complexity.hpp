#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "adasearch/env.hpp"

namespace adasearch {

/// (mu2 - mu1)^2 / mu2 for 0 <= mu1 <= mu2, mu2 > 0.
double divergence(double mu1, double mu2);

/// max(mu2 - mu1, eps)^2 / mu2.
double divergence_eps(double mu1, double mu2, double eps);

/// KL(Poisson(mu1) || Poisson(mu2)); mu1 = 0 gives mu2.
double kl_poisson(double mu1, double mu2);

/// max(1, log x).
double log_plus(double x);

/// 1 + log_+(log_+(u) / delta) / u.
double inversion_T(double u, double delta);

/// 1 - mu_bar / mu_star.
double predicted_ratio(double mu_bar, double mu_star);

/// Reference curve 0.7 mu_star / (mu_star - mu_bar) for speedup plots.
double fitted_speedup(double mu_bar, double mu_star);

struct ComplexityOptions {
  double tau_0 = 1.0;
  std::optional<std::size_t> k;  // defaults to env.k()
  std::optional<double> epsilon;  // adds the eps variants
  std::optional<double> mu_bar;   // defaults to mu^(k+1)
  double delta_total = 0.05;
  double i_fin_constant = 8.0;
};

struct ComplexityReport {
  std::size_t k = 1;
  double tau_0 = 1.0;
  double c_adapt = 0.0;
  double c_unif = 0.0;
  double h_adapt_k = 0.0;
  double h_unif_k = 0.0;
  std::optional<double> h_adapt_k_eps;
  std::optional<double> h_unif_k_eps;
  double predicted_ratio = 0.0;
  double lower_bound = 0.0;  // log(1/delta) * C_adapt, up to a universal constant
  double i_fin_constant = 8.0;
  std::vector<int> per_cell_i_fin_bound;
};

ComplexityReport complexity_terms(const EnvironmentMap& env, const ComplexityOptions& options = {});

/// Per cell, the last round (0-based) in which the cell can still be a
/// candidate when every interval covers its mean: the smallest i with
/// 2^i >= C (1 + log_+(|S| log_+(1/u) / delta) / u), where u is the
/// cell's divergence in units of tau_0.
std::vector<int> i_fin_bound(const EnvironmentMap& env, std::size_t k, double delta_total,
                             double tau_0, double constant = 8.0);

nlohmann::json to_json(const ComplexityReport& report);

}  // namespace adasearch
