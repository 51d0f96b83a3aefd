#pragma once

#include <cstddef>
#include <cstdint>

namespace adasearch {

struct Interval {
  double lcb = 0.0;
  double ucb = 0.0;

  bool contains(double mu) const { return lcb <= mu && mu <= ucb; }
  double width() const { return ucb - lcb; }
};

struct EnvelopeInterval {
  double lcb_bar = 0.0;
  double ucb_bar = 0.0;
};

// Bounds on the mean of a Poisson count N; natural log throughout.
double u_plus(double n, double delta);
double u_minus(double n, double delta);

// Deterministic envelopes around a known mean mu.
double ubar_plus(double mu, double delta);
double ubar_minus(double mu, double delta);
EnvelopeInterval envelope(double mu, double delta);

/// delta / (4 |S| i^2), i >= 1.
double round_delta(double delta_total, std::size_t n_cells, int round_i);

/// Interval on a rate from a count N collected over tau seconds.
Interval pointwise_interval(double n, double tau, double delta);

}  // namespace adasearch
