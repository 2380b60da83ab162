// Apache License, Version 2.0, refer to LICENSE.txt

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "lgp/distributions.hpp"
#include "lgp/errors.hpp"
#include "lgp/sampler.hpp"

namespace lgp {

std::string to_string(ModelKind kind) {
  return kind == ModelKind::Gp ? "gp" : "independence";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "gp" || name == "dependent") return ModelKind::Gp;
  if (name == "independence" || name == "independent") {
    return ModelKind::Independence;
  }
  throw DomainError("unknown model '" + name + "'");
}

void SamplerConfig::validate(Eigen::Index p) const {
  if (sweeps < 0 || burnin < 0 || burnin > sweeps) {
    throw DomainError("sampler: need 0 <= burn-in <= sweeps");
  }
  if (thin < 1) throw DomainError("sampler: thinning must be >= 1");
  if (!(phi_step > 0.0) || !(lambda_step > 0.0)) {
    throw DomainError("sampler: proposal scales must be positive");
  }
  priors.validate(p);
  kernel.validate();
  for (const auto& q : query_points) {
    if (q.size() < p) throw DomainError("sampler: query point too short");
  }
}

void SupportReport::merge(const SupportReport& other) {
  checks += other.checks;
  slice += other.slice;
  interval += other.interval;
  nmax += other.nmax;
  censored += other.censored;
  ordinal += other.ordinal;
}

void sample_slice_variables(LatentState& state, Rng& rng) {
  for (Eigen::Index i = 0; i < state.d.size(); ++i) {
    const double xi = std::exp(-std::abs(static_cast<double>(state.d[i])));
    double u = rng.uniform() * xi;
    if (!(u < xi)) u = std::nextafter(xi, 0.0);
    state.u[i] = u;
  }
}

int slice_bound(double u) {
  int k = static_cast<int>(std::floor(-std::log(u)));
  if (k > 0 && !(u < std::exp(-static_cast<double>(k)))) --k;
  if (u < std::exp(-static_cast<double>(k + 1))) ++k;
  return std::max(k, 0);
}

int compute_nmax(std::span<const double> u) {
  int nmax = 0;
  for (double v : u) {
    if (!(v > 0.0 && v < 1.0)) {
      throw DomainError("compute_nmax: slice variable outside (0, 1)");
    }
    nmax = std::max(nmax, slice_bound(v));
  }
  return nmax;
}

void update_component_params(LatentState& state, const Priors& priors,
                             Rng& rng) {
  const int nmax = state.nmax;
  const std::size_t width = 2 * static_cast<std::size_t>(nmax) + 1;
  std::vector<long> count(width, 0);
  std::vector<double> sum(width, 0.0);
  for (Eigen::Index i = 0; i < state.d.size(); ++i) {
    const int j = state.d[i];
    if (std::abs(j) > nmax) {
      throw NumericalError("label outside [-N_max, N_max] at site " +
                           std::to_string(i + 1));
    }
    const std::size_t k = static_cast<std::size_t>(j + nmax);
    ++count[k];
    sum[k] += state.y[i];
  }
  state.components.prune_outside(nmax);

  std::vector<double> means(width);
  for (int j = -nmax; j <= nmax; ++j) {
    const std::size_t k = static_cast<std::size_t>(j + nmax);
    const double s2 = state.components.fetch(j, priors, rng).variance;
    const double nj = static_cast<double>(count[k]);
    const double tau2 = priors.mu_var;
    const double denom = s2 + nj * tau2;
    const double mean = (priors.mu_mean * s2 + tau2 * sum[k]) / denom;
    const double var = s2 * tau2 / denom;
    means[k] = mean + std::sqrt(var) * rng.normal();
  }

  std::vector<double> ss(width, 0.0);
  for (Eigen::Index i = 0; i < state.d.size(); ++i) {
    const std::size_t k = static_cast<std::size_t>(state.d[i] + nmax);
    const double r = state.y[i] - means[k];
    ss[k] += r * r;
  }
  for (int j = -nmax; j <= nmax; ++j) {
    const std::size_t k = static_cast<std::size_t>(j + nmax);
    const double prec =
        sample_gamma(priors.sigma_shape + 0.5 * static_cast<double>(count[k]),
                     priors.sigma_rate + 0.5 * ss[k], rng);
    if (!(prec > 0.0) || !std::isfinite(1.0 / prec)) {
      throw NumericalError("component precision underflow at label " +
                           std::to_string(j));
    }
    state.components.set(j, {means[k], 1.0 / prec});
  }
}

int draw_label(double y, double u, double eta, double variance,
               const ComponentTable& components, Rng& rng) {
  const int k = slice_bound(u);
  thread_local std::vector<double> logw;
  logw.assign(2 * static_cast<std::size_t>(k) + 1, 0.0);
  double top = -std::numeric_limits<double>::infinity();
  for (int j = -k; j <= k; ++j) {
    const Component& c = components.at(j);
    const double lw = std::abs(static_cast<double>(j)) +
                      normal_logpdf(y, c.mean, c.variance) +
                      log_interval_probability(eta, variance, j - 1.0, j);
    logw[static_cast<std::size_t>(j + k)] = lw;
    top = std::max(top, lw);
  }
  if (!std::isfinite(top)) {
    throw NumericalError("label update: no label has positive probability");
  }
  double total = 0.0;
  for (double& w : logw) {
    w = std::exp(w - top);
    total += w;
  }
  double target = rng.uniform() * total;
  for (int j = -k; j <= k; ++j) {
    target -= logw[static_cast<std::size_t>(j + k)];
    if (target < 0.0) return j;
  }
  // Rounding left a sliver past the end: take the last positive weight.
  for (int j = k; j >= -k; --j) {
    if (logw[static_cast<std::size_t>(j + k)] > 0.0) return j;
  }
  return 0;
}

namespace {

double draw_truncated(const TruncatedNormalSpec& spec, Rng& rng) {
  try {
    return sample_truncated_normal(spec, rng);
  } catch (const DegenerateRegionError&) {
    return sample_truncated_normal_recentered(spec, rng);
  }
}

}  // namespace

double draw_latent(int label, double eta, double variance, Rng& rng) {
  return draw_truncated({eta, variance, label - 1.0, static_cast<double>(label)},
                        rng);
}

void impute_censored(LatentState& state, const Dataset& data, Rng& rng) {
  if (!data.has_censoring()) return;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const auto& c = data.censoring[static_cast<std::size_t>(i)];
    if (!c) continue;
    const Component& k = state.components.at(state.d[i]);
    state.y[i] = draw_truncated({k.mean, k.variance, c->lower, c->upper}, rng);
  }
}

Interval ordinal_set(int category, int max_category) {
  const double inf = std::numeric_limits<double>::infinity();
  if (category <= 0) return {-inf, 0.0};
  if (category >= max_category) return {max_category - 1.0, inf};
  return {category - 1.0, static_cast<double>(category)};
}

int ordinal_category(double latent, int max_category) {
  if (latent <= 0.0) return 0;
  const double c = std::ceil(latent);
  return c >= max_category ? max_category : static_cast<int>(c);
}

void augment_ordinal(LatentState& state, const Dataset& data, Rng& rng) {
  if (!data.is_ordinal()) return;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const Interval a = ordinal_set(static_cast<int>(data.y[i]),
                                   data.ordinal_max[static_cast<std::size_t>(i)]);
    const Component& k = state.components.at(state.d[i]);
    state.y[i] = draw_truncated({k.mean, k.variance, a.lower, a.upper}, rng);
  }
}

namespace {

double interval_start(const Interval& a) {
  const bool lo = std::isfinite(a.lower);
  const bool hi = std::isfinite(a.upper);
  if (lo && hi) return 0.5 * (a.lower + a.upper);
  if (hi) return a.upper - 0.5;
  if (lo) return a.lower + 0.5;
  return 0.0;
}

}  // namespace

void initialize_latent(LatentState& state, const Dataset& data,
                       std::optional<int> frozen_label, double label_range) {
  const Eigen::Index n = data.size();
  state.y = data.y;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (data.is_ordinal()) {
      state.y[i] = interval_start(ordinal_set(
          static_cast<int>(data.y[i]), data.ordinal_max[static_cast<std::size_t>(i)]));
    } else if (data.has_censoring() && data.censoring[static_cast<std::size_t>(i)]) {
      state.y[i] = interval_start(*data.censoring[static_cast<std::size_t>(i)]);
    }
  }

  state.d.resize(n);
  state.z.resize(n);
  state.u.resize(n);
  if (frozen_label) {
    state.d.setConstant(*frozen_label);
  } else {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return state.y[a] < state.y[b];
    });
    for (Eigen::Index r = 0; r < n; ++r) {
      const double q = (static_cast<double>(r) + 0.5) / static_cast<double>(n);
      state.d[order[static_cast<std::size_t>(r)]] = label_of(label_range * (2.0 * q - 1.0));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    state.z[i] = state.d[i] - 0.5;
    state.u[i] = 0.5 * std::exp(-std::abs(static_cast<double>(state.d[i])));
  }
  state.nmax = compute_nmax({state.u.data(), static_cast<std::size_t>(n)});
  state.beta = Eigen::VectorXd::Zero(data.dim() + 1);
  state.beta[0] = state.z.mean();
}

void check_support(const LatentState& state, const Dataset& data,
                   SupportReport& report) {
  ++report.checks;
  for (Eigen::Index i = 0; i < state.d.size(); ++i) {
    const int d = state.d[i];
    const double xi = std::exp(-std::abs(static_cast<double>(d)));
    if (!(state.u[i] > 0.0 && state.u[i] < xi)) ++report.slice;
    if (!(state.z[i] > d - 1.0 && state.z[i] <= d)) ++report.interval;
    if (std::abs(d) > state.nmax) ++report.nmax;
    if (data.has_censoring()) {
      const auto& c = data.censoring[static_cast<std::size_t>(i)];
      if (c && !c->contains(state.y[i])) ++report.censored;
    }
    if (data.is_ordinal()) {
      const Interval a = ordinal_set(static_cast<int>(data.y[i]),
                                     data.ordinal_max[static_cast<std::size_t>(i)]);
      if (!a.contains(state.y[i])) ++report.ordinal;
    }
  }
}

BetaSigmaPosterior beta_sigma_posterior(const Eigen::VectorXd& z,
                                        const Eigen::MatrixXd& design,
                                        const Eigen::MatrixXd& precision_raw,
                                        const Priors& priors) {
  const Eigen::LLT<Eigen::MatrixXd> prior_llt(priors.beta_cov);
  if (prior_llt.info() != Eigen::Success) {
    throw NumericalError("beta prior covariance is not positive definite");
  }
  const Eigen::Index k = design.cols();
  const Eigen::MatrixXd prior_prec =
      prior_llt.solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd pz = precision_raw * z;
  const Eigen::MatrixXd px = precision_raw * design;
  Eigen::MatrixXd post_prec = prior_prec + design.transpose() * px;
  post_prec = 0.5 * (post_prec + post_prec.transpose()).eval();
  const Eigen::LLT<Eigen::MatrixXd> post_llt(post_prec);
  if (post_llt.info() != Eigen::Success) {
    throw NumericalError("beta posterior precision is not positive definite");
  }
  BetaSigmaPosterior out;
  out.cov_raw = post_llt.solve(Eigen::MatrixXd::Identity(k, k));
  out.mean = post_llt.solve(prior_prec * priors.beta_mean +
                            design.transpose() * pz);
  const Eigen::VectorXd r = z - design * out.mean;
  const Eigen::VectorXd dm = out.mean - priors.beta_mean;
  const double q = r.dot(precision_raw * r) + dm.dot(prior_prec * dm);
  out.shape = priors.c_shape + 0.5 * static_cast<double>(z.size());
  out.rate = priors.c_rate + 0.5 * q;
  if (!(out.rate > 0.0) || !std::isfinite(out.rate)) {
    throw NumericalError("sigma_C^2 update: nonpositive rate " +
                         std::to_string(out.rate));
  }
  return out;
}

Eigen::VectorXd criterion_reference(const LatentState& state,
                                    const Dataset& data) {
  if (!data.is_ordinal()) return state.y;
  return data.y;
}

}  // namespace lgp
