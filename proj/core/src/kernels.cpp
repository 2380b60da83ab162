// Apache License, Version 2.0, refer to LICENSE.txt

#include "lgp/kernels.hpp"

#include <cmath>

#include "lgp/errors.hpp"

namespace lgp {

namespace {

constexpr double kMaxJitter = 1e-4;

double squared_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).squaredNorm();
}

}  // namespace

std::string to_string(CorrelationFamily family) {
  switch (family) {
    case CorrelationFamily::SquaredExponential:
      return "squared-exponential";
    case CorrelationFamily::PoweredExponential:
      return "powered-exponential";
    case CorrelationFamily::SpatioTemporal:
      return "spatio-temporal";
  }
  return "unknown";
}

CorrelationFamily parse_correlation_family(const std::string& name) {
  if (name == "squared-exponential" || name == "se") {
    return CorrelationFamily::SquaredExponential;
  }
  if (name == "powered-exponential") return CorrelationFamily::PoweredExponential;
  if (name == "spatio-temporal") return CorrelationFamily::SpatioTemporal;
  throw DomainError("unknown correlation family '" + name + "'");
}

void CorrelationSpec::validate() const {
  if (!(phi1 > 0.0)) throw DomainError("correlation: phi1 must be positive");
  if (!(phi2 > 0.0 && phi2 <= 2.0)) {
    throw DomainError("correlation: phi2 must lie in (0, 2]");
  }
  if (!(jitter >= 0.0)) throw DomainError("correlation: jitter must be >= 0");
  if (space_dims < 0) throw DomainError("correlation: space_dims must be >= 0");
}

double spatio_temporal_correlation(const CorrelationSpec& spec,
                                   const Eigen::VectorXd& x_a,
                                   const Eigen::VectorXd& x_b,
                                   const Eigen::VectorXd& s_a,
                                   const Eigen::VectorXd& s_b, double t_a,
                                   double t_b) {
  if (x_a.size() != x_b.size() || s_a.size() != s_b.size()) {
    throw DomainError("spatio_temporal_correlation: dimension mismatch");
  }
  const double dt = t_a - t_b;
  const double space_time = 0.5 * squared_distance(s_a, s_b) + 0.5 * dt * dt;
  return std::exp(-spec.phi1 * squared_distance(x_a, x_b) - 0.5 * space_time);
}

double correlation(const CorrelationSpec& spec, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DomainError("correlation: dimension mismatch");
  switch (spec.family) {
    case CorrelationFamily::SquaredExponential:
      return std::exp(-spec.phi1 * squared_distance(a, b));
    case CorrelationFamily::PoweredExponential: {
      const double d2 = squared_distance(a, b);
      if (spec.phi2 == 2.0) return std::exp(-spec.phi1 * d2);
      return std::exp(-spec.phi1 * std::pow(std::sqrt(d2), spec.phi2));
    }
    case CorrelationFamily::SpatioTemporal: {
      const Eigen::Index k = a.size() - spec.space_dims - 1;
      if (k < 0) {
        throw DomainError("correlation: site row shorter than space + time");
      }
      return spatio_temporal_correlation(
          spec, a.head(k), b.head(k), a.segment(k, spec.space_dims),
          b.segment(k, spec.space_dims), a[a.size() - 1], b[b.size() - 1]);
    }
  }
  throw DomainError("correlation: unknown family");
}

CorrelationMatrix correlation_matrix(const CorrelationSpec& spec,
                                     const Eigen::MatrixXd& sites) {
  spec.validate();
  const Eigen::Index n = sites.rows();
  if (n < 1) throw DomainError("correlation_matrix: need at least one site");
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i, i) = 1.0;
    const Eigen::VectorXd xi = sites.row(i).transpose();
    for (Eigen::Index l = 0; l < i; ++l) {
      const double v = correlation(spec, xi, sites.row(l).transpose());
      c(i, l) = v;
      c(l, i) = v;
    }
  }
  double jitter = spec.jitter;
  for (;;) {
    CorrelationMatrix out{c, jitter};
    out.values.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(out.values);
    if (llt.info() == Eigen::Success) return out;
    if (jitter >= kMaxJitter) break;
    jitter = jitter > 0.0 ? std::min(jitter * 10.0, kMaxJitter) : 1e-8;
  }
  throw NumericalError(
      "correlation_matrix: Cholesky failed for " + std::to_string(n) +
      " sites even with jitter 1e-4 (" + to_string(spec.family) +
      ", phi1=" + std::to_string(spec.phi1) + ")");
}

Eigen::VectorXd cross_correlation(const CorrelationSpec& spec,
                                  const Eigen::MatrixXd& sites,
                                  const Eigen::VectorXd& x) {
  if (x.size() != sites.cols()) {
    throw DomainError("cross_correlation: dimension mismatch");
  }
  Eigen::VectorXd c(sites.rows());
  for (Eigen::Index i = 0; i < sites.rows(); ++i) {
    c[i] = correlation(spec, x, sites.row(i).transpose());
  }
  return c;
}

}  // namespace lgp
