// Apache License, Version 2.0, refer to LICENSE.txt

#include "lgp/distributions.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "lgp/errors.hpp"

namespace lgp {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2 = 1.41421356237309504880;
// log(1e-300)
constexpr double kLogMinMass = -690.77552789821368;

// log(1 - exp(x)) for x <= 0
double log1mexp(double x) {
  if (x > -0.69314718055994530942) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

// Inverse of the upper tail probability.
double sf_quantile(double q) { return kSqrt2 * boost::math::erfc_inv(2.0 * q); }

double tail_rejection(double a, double b, Rng& rng) {
  const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
  const double width = b - a;
  if (lambda * width < 1.0) {
    for (;;) {
      const double x = a + width * rng.uniform();
      if (rng.uniform() <= std::exp(-0.5 * (x - a) * (x + a))) return x;
    }
  }
  for (;;) {
    const double x = a + rng.exponential() / lambda;
    if (x > b) continue;
    const double r = x - lambda;
    if (rng.uniform() <= std::exp(-0.5 * r * r)) return x;
  }
}

// Standard normal restricted to (a, b] with 0 <= a < b.
double sample_right(double a, double b, Rng& rng) {
  if (a > 6.0) return tail_rejection(a, b, rng);
  const double qa = normal_sf(a);
  const double qb = normal_sf(b);
  const double q = qb + rng.uniform() * (qa - qb);
  return sf_quantile(q);
}

double sample_standard(double a, double b, Rng& rng) {
  if (a >= 0.0) return sample_right(a, b, rng);
  if (b <= 0.0) return -sample_right(-b, -a, rng);
  const double left = 0.5 * std::erf(-a * kInvSqrt2);
  const double right = 0.5 * std::erf(b * kInvSqrt2);
  if (rng.uniform() * (left + right) < left) return -sample_right(0.0, -a, rng);
  return sample_right(0.0, b, rng);
}

void validate(const TruncatedNormalSpec& spec) {
  if (!(spec.variance > 0.0) || !std::isfinite(spec.variance) ||
      !std::isfinite(spec.mean)) {
    throw DomainError("truncated normal: variance must be positive and finite");
  }
  if (!(spec.lower < spec.upper)) {
    throw DomainError("truncated normal: need lower < upper");
  }
}

double map_back(const TruncatedNormalSpec& spec, double sd, double t) {
  double x = spec.mean + sd * t;
  if (x <= spec.lower) {
    x = std::nextafter(spec.lower, std::numeric_limits<double>::infinity());
  }
  if (x > spec.upper) x = spec.upper;
  return x;
}

}  // namespace

double normal_cdf(double t) { return 0.5 * std::erfc(-t * kInvSqrt2); }

double normal_sf(double t) { return 0.5 * std::erfc(t * kInvSqrt2); }

double log_normal_sf(double t) {
  if (t < 30.0) return std::log(0.5 * std::erfc(t * kInvSqrt2));
  // Asymptotic (Mills ratio) expansion; relative error below 1e-13 here.
  const double r = 1.0 / (t * t);
  const double series =
      1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
  return -0.5 * t * t - std::log(t) - kLogSqrt2Pi + std::log(series);
}

double log_normal_cdf(double t) { return log_normal_sf(-t); }

double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return -kSqrt2 * boost::math::erfc_inv(2.0 * p);
}

double log_standard_interval_probability(double lo, double hi) {
  if (!(lo < hi)) return -std::numeric_limits<double>::infinity();
  if (lo >= 0.0) {
    const double a = log_normal_sf(lo);
    if (hi == std::numeric_limits<double>::infinity()) return a;
    return a + log1mexp(log_normal_sf(hi) - a);
  }
  if (hi <= 0.0) return log_standard_interval_probability(-hi, -lo);
  return std::log(0.5 * std::erf(hi * kInvSqrt2) +
                  0.5 * std::erf(-lo * kInvSqrt2));
}

double log_interval_probability(double mean, double variance, double lo,
                                double hi) {
  if (!(variance > 0.0)) {
    throw DomainError("log_interval_probability: variance must be positive");
  }
  const double sd = std::sqrt(variance);
  return log_standard_interval_probability((lo - mean) / sd, (hi - mean) / sd);
}

double sample_truncated_normal(const TruncatedNormalSpec& spec, Rng& rng) {
  validate(spec);
  const double sd = std::sqrt(spec.variance);
  const double a = (spec.lower - spec.mean) / sd;
  const double b = (spec.upper - spec.mean) / sd;
  if (log_standard_interval_probability(a, b) < kLogMinMass) {
    throw DegenerateRegionError(
        "truncated normal: interval (" + std::to_string(spec.lower) + ", " +
        std::to_string(spec.upper) + "] has mass below 1e-300 under n(" +
        std::to_string(spec.mean) + ", " + std::to_string(spec.variance) + ")");
  }
  return map_back(spec, sd, sample_standard(a, b, rng));
}

double sample_truncated_normal_recentered(const TruncatedNormalSpec& spec,
                                          Rng& rng) {
  validate(spec);
  const double sd = std::sqrt(spec.variance);
  const double a = (spec.lower - spec.mean) / sd;
  const double b = (spec.upper - spec.mean) / sd;
  return map_back(spec, sd, sample_standard(a, b, rng));
}

double sample_gamma(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) ||
      !std::isfinite(rate)) {
    throw DomainError("sample_gamma: shape and rate must be positive");
  }
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, 1.0, rng);
    return g * std::pow(rng.uniform(), 1.0 / shape) / rate;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v / rate;
    }
  }
}

Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& lower_factor, Rng& rng) {
  Eigen::VectorXd e(mean.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) e[k] = rng.normal();
  return mean + lower_factor.triangularView<Eigen::Lower>() * e;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  engine_.seed(seq);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double a, b, s;
  do {
    a = 2.0 * uniform() - 1.0;
    b = 2.0 * uniform() - 1.0;
    s = a * a + b * b;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = b * m;
  has_spare_ = true;
  return a * m;
}

double Rng::exponential() { return -std::log(uniform()); }

std::uint64_t Rng::below(std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

}  // namespace lgp
