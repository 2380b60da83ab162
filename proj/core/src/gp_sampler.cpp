// Apache License, Version 2.0, refer to LICENSE.txt

#include <cmath>

#include "lgp/distributions.hpp"
#include "lgp/errors.hpp"
#include "lgp/sampler.hpp"

namespace lgp {

namespace {

double logit(double p) { return std::log(p) - std::log1p(-p); }
double inv_logit(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

GpSampler::GpSampler(const Dataset& data, const SamplerConfig& config, Rng& rng)
    : data_(data), config_(config), rng_(&rng) {
  data_.validate();
  config_.validate(data_.dim());
  design_ = intercept_design(data_.x);
  sites_ = data_.kernel_inputs();
  initialize_latent(state_, data_, config_.frozen_label,
                    config_.initial_label_range);
  state_.sigma_c2 = 1.0;
  rebuild_correlation(config_.kernel.phi1, config_.kernel.phi2);
}

CorrelationSpec GpSampler::current_kernel() const {
  CorrelationSpec spec = config_.kernel;
  spec.phi1 = state_.phi1;
  spec.phi2 = state_.phi2;
  return spec;
}

void GpSampler::rebuild_correlation(double phi1, double phi2) {
  state_.phi1 = phi1;
  state_.phi2 = phi2;
  const CorrelationSpec spec = current_kernel();
  workspace_ = GpWorkspace::build(correlation_matrix(spec, sites_).values,
                                  state_.sigma_c2);
  queries_.clear();
  for (const auto& x : config_.query_points) {
    queries_.push_back(prepare_query(x, sites_, spec, workspace_, design_.cols()));
  }
  refresh_residuals();
}

void GpSampler::refresh_residuals() {
  mean_ = design_ * state_.beta;
  w_ = workspace_.precision_raw() * (state_.z - mean_);
}

void GpSampler::sample_slice_variables() {
  lgp::sample_slice_variables(state_, *rng_);
  state_.nmax = compute_nmax({state_.u.data(), static_cast<std::size_t>(state_.u.size())});
}

void GpSampler::update_component_params() {
  lgp::update_component_params(state_, config_.priors, *rng_);
}

SiteConditional GpSampler::site_conditional(Eigen::Index i) const {
  return conditional_site_cached(i, mean_[i], state_.z[i] - mean_[i], w_[i],
                                 workspace_);
}

void GpSampler::update_labels_and_latent() {
  const Eigen::MatrixXd& psi = workspace_.precision_raw();
  for (Eigen::Index i = 0; i < state_.z.size(); ++i) {
    const SiteConditional c = site_conditional(i);
    const int d = draw_label(state_.y[i], state_.u[i], c.mean, c.variance,
                             state_.components, *rng_);
    state_.d[i] = d;
    const double z = draw_latent(d, c.mean, c.variance, *rng_);
    w_ += psi.col(i) * (z - state_.z[i]);
    state_.z[i] = z;
  }
}

void GpSampler::update_latent_z() {
  const Eigen::MatrixXd& psi = workspace_.precision_raw();
  for (Eigen::Index i = 0; i < state_.z.size(); ++i) {
    const SiteConditional c = site_conditional(i);
    const double z = draw_latent(state_.d[i], c.mean, c.variance, *rng_);
    w_ += psi.col(i) * (z - state_.z[i]);
    state_.z[i] = z;
  }
}

void GpSampler::update_latent_joint() {
  const Eigen::Index n = state_.z.size();
  // log of prod_i xi_{d_i}^{-1} n(y_i | theta_{d_i}) 1(u_i < xi_{d_i}) with
  // d_i = label_of(z_i); -inf off the slice.
  auto log_lik = [&](const Eigen::VectorXd& z) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int j = label_of(z[i]);
      if (std::abs(j) > slice_bound(state_.u[i])) {
        return -std::numeric_limits<double>::infinity();
      }
      const Component& c = state_.components.at(j);
      total += std::abs(static_cast<double>(j)) +
               normal_logpdf(state_.y[i], c.mean, c.variance);
    }
    return total;
  };

  Eigen::VectorXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) e[i] = rng_->normal();
  Eigen::VectorXd nu = workspace_.factor().matrixL() * e;
  nu *= std::sqrt(state_.sigma_c2);
  const Eigen::VectorXd f = state_.z - mean_;
  const double threshold = log_lik(state_.z) + std::log(rng_->uniform());

  double angle = 2.0 * M_PI * rng_->uniform();
  double lo = angle - 2.0 * M_PI;
  double hi = angle;
  Eigen::VectorXd z(n);
  for (;;) {
    z = mean_ + f * std::cos(angle) + nu * std::sin(angle);
    if (log_lik(z) > threshold) break;
    if (angle < 0.0) {
      lo = angle;
    } else {
      hi = angle;
    }
    angle = lo + (hi - lo) * rng_->uniform();
    if (hi - lo < 1e-12) {
      z = state_.z;
      break;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) state_.d[i] = label_of(z[i]);
  state_.z = z;
  w_ = workspace_.precision_raw() * (state_.z - mean_);
}

void GpSampler::update_sigma_c() {
  const BetaSigmaPosterior post = beta_sigma_posterior(
      state_.z, design_, workspace_.precision_raw(), config_.priors);
  const double prec = sample_gamma(post.shape, post.rate, *rng_);
  if (!(prec > 0.0) || !std::isfinite(1.0 / prec)) {
    throw NumericalError("sigma_C^2 draw out of range");
  }
  state_.sigma_c2 = 1.0 / prec;
  workspace_.set_sigma_c2(state_.sigma_c2);
}

void GpSampler::update_beta() {
  const BetaSigmaPosterior post = beta_sigma_posterior(
      state_.z, design_, workspace_.precision_raw(), config_.priors);
  const Eigen::LLT<Eigen::MatrixXd> llt(post.cov_raw * state_.sigma_c2);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("beta posterior covariance is not positive definite");
  }
  state_.beta = sample_mvn(post.mean, llt.matrixL(), *rng_);
  refresh_residuals();
}

void GpSampler::update_phi() {
  if (config_.phi_mode == PhiMode::Fixed) return;
  const Priors& pr = config_.priors;
  const bool powered = config_.kernel.family == CorrelationFamily::PoweredExponential;

  // Target on the transformed scale: lognormal prior on phi1 becomes normal
  // on log phi1; a uniform prior on phi2 in (0, 2) becomes s (1 - s) on
  // logit(phi2 / 2).
  auto log_prior = [&](double lp1, double lg2) {
    const double r = (lp1 - pr.log_phi1_mean) / pr.log_phi1_sd;
    double v = -0.5 * r * r;
    if (powered) {
      const double s = inv_logit(lg2);
      v += std::log(s) + std::log1p(-s);
    }
    return v;
  };

  const double lp1 = std::log(state_.phi1);
  const double lg2 = powered ? logit(state_.phi2 / 2.0) : 0.0;
  const double lp1_new = lp1 + config_.phi_step * rng_->normal();
  const double lg2_new = powered ? lg2 + config_.phi_step * rng_->normal() : 0.0;
  ++phi_proposals_;

  const double phi1_new = std::exp(lp1_new);
  const double phi2_new = powered ? 2.0 * inv_logit(lg2_new) : state_.phi2;
  if (!(phi1_new > 0.0) || !std::isfinite(phi1_new) || !(phi2_new > 0.0) ||
      !(phi2_new <= 2.0)) {
    return;
  }
  CorrelationSpec spec = config_.kernel;
  spec.phi1 = phi1_new;
  spec.phi2 = phi2_new;
  GpWorkspace proposal;
  try {
    proposal = GpWorkspace::build(correlation_matrix(spec, sites_).values,
                                  state_.sigma_c2);
  } catch (const NumericalError&) {
    return;
  }
  const double log_ratio =
      gp_logdensity(state_.z, state_.beta, design_, proposal) +
      log_prior(lp1_new, lg2_new) -
      gp_logdensity(state_.z, state_.beta, design_, workspace_) -
      log_prior(lp1, lg2);
  if (std::log(rng_->uniform()) < log_ratio) {
    ++phi_accepts_;
    workspace_ = std::move(proposal);
    state_.phi1 = phi1_new;
    state_.phi2 = phi2_new;
    queries_.clear();
    for (const auto& x : config_.query_points) {
      queries_.push_back(prepare_query(x, sites_, spec, workspace_, design_.cols()));
    }
    refresh_residuals();
  }
}

void GpSampler::impute_censored() { lgp::impute_censored(state_, data_, *rng_); }

void GpSampler::augment_ordinal() { lgp::augment_ordinal(state_, data_, *rng_); }

void GpSampler::sweep_core() {
  sample_slice_variables();
  update_component_params();
  if (config_.frozen_label) {
    update_latent_z();
  } else {
    update_labels_and_latent();
    for (int k = 0; k < config_.joint_moves; ++k) update_latent_joint();
  }
  update_sigma_c();
  update_beta();
  update_phi();
}

void GpSampler::sweep_extensions() {
  impute_censored();
  augment_ordinal();
}

PredictiveMoments GpSampler::query_moments(std::size_t q) const {
  return evaluate_query(queries_.at(q), state_.beta, state_.z - mean_,
                        state_.sigma_c2);
}

PredictiveMoments GpSampler::predictive_at(const Eigen::VectorXd& x) const {
  return predictive_moments(x, state_.z, state_.beta, design_, sites_,
                            workspace_, current_kernel());
}

PredictiveDraw GpSampler::draw_predictive_site(Eigen::Index i) {
  PredictiveDraw out;
  out.z = state_.z[i];
  out.label = state_.d[i];
  const Component& c = state_.components.fetch(out.label, config_.priors, *rng_);
  out.y = c.mean + std::sqrt(c.variance) * rng_->normal();
  return out;
}

PredictiveDraw GpSampler::draw_predictive(std::size_t q) {
  return draw_predictive(query_moments(q));
}

PredictiveDraw GpSampler::draw_predictive(const PredictiveMoments& m) {
  PredictiveDraw out;
  out.z = m.variance > 0.0 ? m.mean + std::sqrt(m.variance) * rng_->normal()
                           : m.mean;
  out.label = label_of(out.z);
  const Component& c = state_.components.fetch(out.label, config_.priors, *rng_);
  out.y = c.mean + std::sqrt(c.variance) * rng_->normal();
  return out;
}

double GpSampler::phi_acceptance() const {
  return phi_proposals_ == 0
             ? 0.0
             : static_cast<double>(phi_accepts_) / static_cast<double>(phi_proposals_);
}

}  // namespace lgp
