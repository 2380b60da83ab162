// Apache License, Version 2.0, refer to LICENSE.txt

#include "lgp/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lgp/distributions.hpp"
#include "lgp/errors.hpp"

namespace lgp {

Eigen::VectorXd Standardization::apply(const Eigen::VectorXd& raw) const {
  if (static_cast<std::size_t>(raw.size()) != mean.size()) {
    throw DomainError("standardization: covariate dimension mismatch");
  }
  Eigen::VectorXd out(raw.size());
  for (Eigen::Index k = 0; k < raw.size(); ++k) {
    out[k] = (raw[k] - mean[k]) / sd[k];
  }
  return out;
}

Eigen::MatrixXd Dataset::kernel_inputs() const {
  if (coords.cols() == 0) return x;
  Eigen::MatrixXd out(x.rows(), x.cols() + coords.cols());
  out << x, coords;
  return out;
}

void Dataset::validate() const {
  const Eigen::Index n = y.size();
  if (n < 1) throw DomainError("dataset: need at least one observation");
  if (x.cols() < 1) throw DomainError("dataset: need at least one covariate");
  if (x.rows() != n) throw DomainError("dataset: covariate rows != responses");
  if (coords.cols() > 0 && coords.rows() != n) {
    throw DomainError("dataset: coordinate rows != responses");
  }
  if (!x.allFinite()) throw DomainError("dataset: non-finite covariate");
  if (!censoring.empty()) {
    if (static_cast<Eigen::Index>(censoring.size()) != n) {
      throw DomainError("dataset: censoring must have one entry per row");
    }
    for (const auto& c : censoring) {
      if (c && !(c->lower < c->upper)) {
        throw DomainError("dataset: censoring interval needs lower < upper");
      }
    }
  }
  if (!ordinal_max.empty()) {
    if (static_cast<Eigen::Index>(ordinal_max.size()) != n) {
      throw DomainError("dataset: ordinal_max must have one entry per row");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double c = y[i];
      if (ordinal_max[i] < 1 || c != std::floor(c) || c < 0 ||
          c > ordinal_max[i]) {
        throw DomainError("dataset: ordinal response out of {0..max} at row " +
                          std::to_string(i + 1));
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool censored = !censoring.empty() && censoring[i].has_value();
    if (!censored && !std::isfinite(y[i])) {
      throw DomainError("dataset: non-finite response at row " +
                        std::to_string(i + 1));
    }
  }
}

Standardization standardize_columns(Eigen::MatrixXd& x) {
  Standardization s;
  const Eigen::Index n = x.rows();
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const double m = x.col(k).mean();
    const double ss = (x.col(k).array() - m).square().sum();
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    if (!(sd > 1e-12 * std::max(1.0, std::abs(m)))) {
      throw DomainError("zero variance column " + std::to_string(k + 1));
    }
    x.col(k) = (x.col(k).array() - m) / sd;
    s.mean.push_back(m);
    s.sd.push_back(sd);
  }
  return s;
}

Eigen::MatrixXd intercept_design(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd d(x.rows(), x.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(x.cols()) = x;
  return d;
}

int label_of(double v) {
  if (!std::isfinite(v)) throw DomainError("label_of: non-finite value");
  const double j = std::ceil(v);
  if (std::abs(j) > 1e9) throw DomainError("label_of: value out of range");
  return static_cast<int>(j);
}

double mixture_weight(int j, double eta, double variance) {
  if (!(variance > 0.0)) {
    throw DomainError("mixture_weight: variance must be positive");
  }
  return std::exp(log_interval_probability(eta, variance, j - 1.0, j));
}

int default_truncation(double eta, double variance) {
  return static_cast<int>(std::ceil(std::abs(eta) + 8.0 * std::sqrt(variance)));
}

Priors Priors::defaults(Eigen::Index p) {
  Priors priors;
  priors.beta_mean = Eigen::VectorXd::Zero(p + 1);
  priors.beta_cov = 1e5 * Eigen::MatrixXd::Identity(p + 1, p + 1);
  return priors;
}

void Priors::validate(Eigen::Index p) const {
  if (!(mu_var > 0) || !(sigma_shape > 0) || !(sigma_rate > 0) ||
      !(c_shape > 0) || !(c_rate > 0) || !(log_phi1_sd > 0) ||
      !(lambda_var > 0)) {
    throw DomainError("priors: variances and gamma parameters must be positive");
  }
  if (beta_mean.size() != p + 1 || beta_cov.rows() != p + 1 ||
      beta_cov.cols() != p + 1) {
    throw DomainError("priors: beta prior must have dimension p + 1");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(beta_cov);
  if (llt.info() != Eigen::Success) {
    throw DomainError("priors: beta covariance is not positive definite");
  }
}

Component draw_component_from_prior(const Priors& priors, Rng& rng) {
  Component c;
  c.variance = 1.0 / sample_gamma(priors.sigma_shape, priors.sigma_rate, rng);
  c.mean = priors.mu_mean + std::sqrt(priors.mu_var) * rng.normal();
  return c;
}

const Component& ComponentTable::at(int j) const {
  auto it = entries_.find(j);
  if (it == entries_.end()) {
    throw DomainError("component " + std::to_string(j) + " not instantiated");
  }
  return it->second;
}

void ComponentTable::set(int j, const Component& c) {
  if (!(c.variance > 0.0)) {
    throw DomainError("component variance must be positive");
  }
  entries_[j] = c;
}

const Component& ComponentTable::fetch(int j, const Priors& priors, Rng& rng) {
  auto it = entries_.find(j);
  if (it != entries_.end()) return it->second;
  return entries_.emplace(j, draw_component_from_prior(priors, rng))
      .first->second;
}

void ComponentTable::ensure_range(int lo, int hi, const Priors& priors,
                                  Rng& rng) {
  for (int j = lo; j <= hi; ++j) fetch(j, priors, rng);
}

void ComponentTable::prune_outside(int bound) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (std::abs(it->first) > bound) {
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
}

std::pair<int, int> mixture_window(double eta, double variance,
                                   std::optional<int> truncation) {
  if (!(variance > 0.0)) {
    throw DomainError("mixture_density: variance must be positive");
  }
  const int bound = truncation.value_or(default_truncation(eta, variance));
  if (bound < 1) throw DomainError("mixture_density: truncation must be >= 1");
  const double reach = 9.0 * std::sqrt(variance);
  const double lo = std::max<double>(-bound, std::floor(eta - reach));
  const double hi = std::min<double>(bound, std::ceil(eta + reach) + 1.0);
  return {static_cast<int>(lo), static_cast<int>(hi)};
}

double mixture_density(double y, double eta, double variance,
                       const ComponentTable& components,
                       std::optional<int> truncation) {
  const auto [lo, hi] = mixture_window(eta, variance, truncation);
  double mass = 0.0;
  double density = 0.0;
  for (int j = lo; j <= hi; ++j) {
    const double w = mixture_weight(j, eta, variance);
    if (w == 0.0) continue;
    const Component& c = components.at(j);
    mass += w;
    density += w * std::exp(normal_logpdf(y, c.mean, c.variance));
  }
  if (mass < 1.0 - 1e-6) {
    throw TruncationError("mixture_density: truncation covers weight mass " +
                          std::to_string(mass));
  }
  return density;
}

}  // namespace lgp
