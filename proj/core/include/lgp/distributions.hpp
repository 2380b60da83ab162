// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "lgp/random.hpp"

namespace lgp {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double normal_cdf(double t);
double normal_sf(double t);  // 1 - cdf, accurate in the upper tail
double log_normal_cdf(double t);
double log_normal_sf(double t);
double normal_quantile(double p);

// log density of n(x | mean, variance)
inline double normal_logpdf(double x, double mean, double variance) {
  const double r = x - mean;
  return -kLogSqrt2Pi - 0.5 * std::log(variance) - 0.5 * r * r / variance;
}

// log P(lo < T <= hi) for T standard normal, lo < hi. Stays finite deep in
// either tail where the plain CDF difference underflows.
double log_standard_interval_probability(double lo, double hi);

// log P(lo < X <= hi) for X ~ n(mean, variance).
double log_interval_probability(double mean, double variance, double lo,
                                double hi);

struct TruncatedNormalSpec {
  double mean = 0.0;
  double variance = 1.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

// Draw from n(mean, variance) restricted to (lower, upper]. Inverse CDF in
// the bulk, exponential or uniform rejection beyond six standard deviations.
// Throws DegenerateRegionError when the interval mass is below 1e-300.
double sample_truncated_normal(const TruncatedNormalSpec& spec, Rng& rng);

// Same distribution without the mass guard: the problem is re-centred on
// the endpoint nearest the mean and the tail is sampled by rejection, which
// needs no normalising constant. Used by the Gibbs sweeps when the
// conditional lands a site far outside its interval.
double sample_truncated_normal_recentered(const TruncatedNormalSpec& spec,
                                          Rng& rng);

// Shape-rate gamma (Marsaglia-Tsang).
double sample_gamma(double shape, double rate, Rng& rng);

// mean + factor * N(0, I); factor is lower triangular.
Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& lower_factor, Rng& rng);

}  // namespace lgp
