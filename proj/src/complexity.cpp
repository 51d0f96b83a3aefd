#include "adasearch/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adasearch/error.hpp"

namespace adasearch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pair(double mu1, double mu2) {
  require(std::isfinite(mu1) && std::isfinite(mu2), ErrorCode::kInvalidArgument,
          "rates must be finite");
  require(mu2 > 0, ErrorCode::kInvalidArgument, "mu2 must be > 0");
  require(mu1 >= 0 && mu1 <= mu2, ErrorCode::kInvalidArgument, "need 0 <= mu1 <= mu2");
}

double inverse(double d) { return d > 0 ? 1.0 / d : kInf; }

/// Divergence of the pair (lo, hi) for a cell, infinite cost when hi = 0.
double cell_divergence(double lo, double hi, const std::optional<double>& eps) {
  if (hi <= 0) return 0.0;
  return eps ? divergence_eps(lo, hi, *eps) : divergence(lo, hi);
}

struct SplitTerms {
  double adapt = 0.0;
  double unif = 0.0;
};

SplitTerms h_terms(const EnvironmentMap& env, std::size_t k, double tau_0,
                   const std::optional<double>& eps) {
  const double mu_k = env.kth_largest(k);
  const double mu_k1 = env.kth_largest(k + 1);
  const CellSet top = true_top_k(env);
  const double n = static_cast<double>(env.size());
  SplitTerms t;
  t.adapt = n * tau_0;
  for (CellIndex x = 0; x < env.size(); ++x) {
    const bool source = std::binary_search(top.begin(), top.end(), x);
    t.adapt += source ? inverse(cell_divergence(mu_k1, env.mu(x), eps))
                      : inverse(cell_divergence(env.mu(x), mu_k, eps));
  }
  t.unif = n * tau_0 + n * inverse(cell_divergence(mu_k1, mu_k, eps));
  return t;
}

EnvironmentMap with_k(const EnvironmentMap& env, std::size_t k) {
  return EnvironmentMap(env.grid(), env.mu(), k, env.seed());
}

}  // namespace

double divergence(double mu1, double mu2) {
  check_pair(mu1, mu2);
  return (mu2 - mu1) * (mu2 - mu1) / mu2;
}

double divergence_eps(double mu1, double mu2, double eps) {
  check_pair(mu1, mu2);
  require(eps > 0, ErrorCode::kInvalidArgument, "epsilon must be > 0");
  const double gap = std::max(mu2 - mu1, eps);
  return gap * gap / mu2;
}

double kl_poisson(double mu1, double mu2) {
  require(mu2 > 0 && std::isfinite(mu2), ErrorCode::kInvalidArgument, "mu2 must be > 0");
  require(mu1 >= 0 && std::isfinite(mu1), ErrorCode::kInvalidArgument, "mu1 must be >= 0");
  if (mu1 == 0) return mu2;
  return mu1 * std::log(mu1 / mu2) + mu2 - mu1;
}

double log_plus(double x) { return x > std::exp(1.0) ? std::log(x) : 1.0; }

double inversion_T(double u, double delta) {
  require(u > 0 && std::isfinite(u), ErrorCode::kInvalidArgument, "u must be > 0");
  require(delta > 0 && delta <= 1, ErrorCode::kInvalidArgument, "delta must be in (0, 1]");
  return 1.0 + log_plus(log_plus(u) / delta) / u;
}

double predicted_ratio(double mu_bar, double mu_star) {
  require(mu_star > 0, ErrorCode::kInvalidArgument, "mu_star must be > 0");
  require(mu_bar >= 0 && mu_bar < mu_star, ErrorCode::kInvalidArgument,
          "need 0 <= mu_bar < mu_star");
  return 1.0 - mu_bar / mu_star;
}

double fitted_speedup(double mu_bar, double mu_star) {
  return 0.7 / predicted_ratio(mu_bar, mu_star);
}

std::vector<int> i_fin_bound(const EnvironmentMap& env, std::size_t k, double delta_total,
                             double tau_0, double constant) {
  require(delta_total > 0 && delta_total < 1, ErrorCode::kInvalidArgument,
          "delta must be in (0, 1)");
  require(tau_0 > 0, ErrorCode::kInvalidArgument, "tau_0 must be > 0");
  require(constant > 0, ErrorCode::kInvalidArgument, "constant must be > 0");
  const EnvironmentMap e = with_k(env, k);
  const CellSet top = true_top_k(e);
  const double mu_k = e.kth_largest(k);
  const double mu_k1 = e.kth_largest(k + 1);
  const double n = static_cast<double>(e.size());
  std::vector<int> out(e.size(), 0);
  for (CellIndex x = 0; x < e.size(); ++x) {
    const bool source = std::binary_search(top.begin(), top.end(), x);
    const double d = source ? (e.mu(x) > 0 ? divergence(mu_k1, e.mu(x)) : 0.0)
                            : divergence(e.mu(x), mu_k);
    const double u = d * tau_0;
    if (!(u > 0)) {
      out[x] = std::numeric_limits<int>::max();
      continue;
    }
    const double rhs = constant * (1.0 + log_plus(n * log_plus(1.0 / u) / delta_total) / u);
    out[x] = std::max(0, static_cast<int>(std::ceil(std::log2(rhs))));
  }
  return out;
}

ComplexityReport complexity_terms(const EnvironmentMap& env, const ComplexityOptions& options) {
  require(options.tau_0 > 0, ErrorCode::kInvalidArgument, "tau_0 must be > 0");
  const std::size_t k = options.k.value_or(env.k());
  const EnvironmentMap e = with_k(env, k);
  if (!options.epsilon) {
    require(e.identifiable(), ErrorCode::kNonIdentifiable,
            "complexity terms need a unique top-k set");
  }
  ComplexityReport r;
  r.k = k;
  r.tau_0 = options.tau_0;
  r.i_fin_constant = options.i_fin_constant;
  const double n = static_cast<double>(e.size());

  // Single-source terms around the maximum.
  const double mu_star = e.kth_largest(1);
  CellIndex x_star = 0;
  for (CellIndex x = 1; x < e.size(); ++x) {
    if (e.mu(x) > e.mu(x_star)) x_star = x;
  }
  double sum_inv = 0.0;
  double max_inv = 0.0;
  for (CellIndex x = 0; x < e.size(); ++x) {
    if (x == x_star) continue;
    const double inv = mu_star > 0 ? inverse(divergence(e.mu(x), mu_star)) : kInf;
    sum_inv += inv;
    max_inv = std::max(max_inv, inv);
  }
  r.c_adapt = n * options.tau_0 + sum_inv;
  r.c_unif = n * options.tau_0 + n * max_inv;

  if (e.identifiable()) {
    const SplitTerms h = h_terms(e, k, options.tau_0, std::nullopt);
    r.h_adapt_k = h.adapt;
    r.h_unif_k = h.unif;
    r.per_cell_i_fin_bound =
        i_fin_bound(e, k, options.delta_total, options.tau_0, options.i_fin_constant);
  } else {
    r.h_adapt_k = r.h_unif_k = kInf;
  }
  if (options.epsilon) {
    // Ties are harmless here: the eps floor keeps every divergence positive.
    const double mu_k = e.kth_largest(k);
    const double mu_k1 = e.kth_largest(k + 1);
    double adapt = n * options.tau_0;
    CellSet order(e.size());
    for (CellIndex x = 0; x < e.size(); ++x) order[x] = x;
    std::stable_sort(order.begin(), order.end(),
                     [&](CellIndex a, CellIndex b) { return e.mu(a) > e.mu(b); });
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      const double mu = e.mu(order[rank]);
      adapt += rank < k ? inverse(cell_divergence(mu_k1, mu, options.epsilon))
                        : inverse(cell_divergence(mu, mu_k, options.epsilon));
    }
    r.h_adapt_k_eps = adapt;
    r.h_unif_k_eps = n * options.tau_0 + n * inverse(cell_divergence(mu_k1, mu_k, options.epsilon));
  }

  const double mu_bar = options.mu_bar.value_or(e.kth_largest(k + 1));
  const double mu_k = e.kth_largest(k);
  r.predicted_ratio = (mu_k > 0 && mu_bar < mu_k) ? predicted_ratio(mu_bar, mu_k) : 0.0;
  r.lower_bound = -std::log(options.delta_total) * r.c_adapt;
  return r;
}

nlohmann::json to_json(const ComplexityReport& r) {
  auto finite_or_null = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json j = {{"k", r.k},
                      {"tau_0", r.tau_0},
                      {"c_adapt", finite_or_null(r.c_adapt)},
                      {"c_unif", finite_or_null(r.c_unif)},
                      {"h_adapt_k", finite_or_null(r.h_adapt_k)},
                      {"h_unif_k", finite_or_null(r.h_unif_k)},
                      {"predicted_ratio", r.predicted_ratio},
                      {"lower_bound", finite_or_null(r.lower_bound)},
                      {"lower_bound_note", "log(1/delta) * C_adapt, up to a universal constant"},
                      {"i_fin_constant", r.i_fin_constant},
                      {"per_cell_i_fin_bound", r.per_cell_i_fin_bound}};
  if (r.h_adapt_k_eps) j["h_adapt_k_eps"] = finite_or_null(*r.h_adapt_k_eps);
  if (r.h_unif_k_eps) j["h_unif_k_eps"] = finite_or_null(*r.h_unif_k_eps);
  return j;
}

}  // namespace adasearch
