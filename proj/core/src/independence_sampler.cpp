// Apache License, Version 2.0, refer to LICENSE.txt

#include <algorithm>
#include <cmath>

#include "lgp/distributions.hpp"
#include "lgp/errors.hpp"
#include "lgp/sampler.hpp"

namespace lgp {

namespace {

constexpr long kAdaptWindow = 50;
constexpr double kTargetAcceptance = 0.44;

}  // namespace

IndependenceSampler::IndependenceSampler(const Dataset& data,
                                         const SamplerConfig& config, Rng& rng)
    : data_(data), config_(config), rng_(&rng) {
  data_.validate();
  config_.validate(data_.dim());
  design_ = intercept_design(data_.x);
  const Eigen::Index k = design_.cols();
  for (const auto& x : config_.query_points) {
    Eigen::VectorXd row(k);
    row[0] = 1.0;
    row.tail(k - 1) = x.head(k - 1);
    query_rows_.push_back(row);
  }
  initialize_latent(state_, data_, config_.frozen_label,
                    config_.initial_label_range);
  state_.lambda = Eigen::VectorXd::Zero(k);
  steps_ = Eigen::VectorXd::Constant(k, config_.lambda_step);
  window_accepts_ = Eigen::VectorXd::Zero(k);
}

double IndependenceSampler::site_variance(Eigen::Index i) const {
  return std::exp(design_.row(i).dot(state_.lambda));
}

void IndependenceSampler::sample_slice_variables() {
  lgp::sample_slice_variables(state_, *rng_);
  state_.nmax = compute_nmax({state_.u.data(), static_cast<std::size_t>(state_.u.size())});
}

void IndependenceSampler::update_component_params() {
  lgp::update_component_params(state_, config_.priors, *rng_);
}

void IndependenceSampler::update_labels_and_latent() {
  for (Eigen::Index i = 0; i < state_.z.size(); ++i) {
    const double eta = design_.row(i).dot(state_.beta);
    const double v = site_variance(i);
    const int d = draw_label(state_.y[i], state_.u[i], eta, v,
                             state_.components, *rng_);
    state_.d[i] = d;
    state_.z[i] = draw_latent(d, eta, v, *rng_);
  }
}

void IndependenceSampler::update_latent_z() {
  for (Eigen::Index i = 0; i < state_.z.size(); ++i) {
    state_.z[i] = draw_latent(state_.d[i], design_.row(i).dot(state_.beta),
                              site_variance(i), *rng_);
  }
}

void IndependenceSampler::update_beta() {
  const Priors& pr = config_.priors;
  const Eigen::Index k = design_.cols();
  Eigen::VectorXd weight(design_.rows());
  for (Eigen::Index i = 0; i < design_.rows(); ++i) weight[i] = 1.0 / site_variance(i);
  const Eigen::LLT<Eigen::MatrixXd> prior_llt(pr.beta_cov);
  const Eigen::MatrixXd prior_prec = prior_llt.solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd wx = weight.asDiagonal() * design_;
  const Eigen::MatrixXd prec = prior_prec + design_.transpose() * wx;
  const Eigen::LLT<Eigen::MatrixXd> llt(prec);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("beta posterior precision is not positive definite");
  }
  const Eigen::VectorXd mean =
      llt.solve(prior_prec * pr.beta_mean + wx.transpose() * state_.z);
  // beta = mean + U^{-1} e with prec = U^T U gives covariance prec^{-1}.
  Eigen::VectorXd e(k);
  for (Eigen::Index j = 0; j < k; ++j) e[j] = rng_->normal();
  state_.beta = mean + llt.matrixU().solve(e);
}

void IndependenceSampler::update_lambda(bool adapting) {
  const Eigen::VectorXd eta = design_ * state_.beta;
  const Eigen::VectorXd r2 = (state_.z - eta).array().square();
  const double prior_var = config_.priors.lambda_var;
  auto log_target = [&](const Eigen::VectorXd& lin, const Eigen::VectorXd& lam) {
    // sum_i log n(z_i | eta_i, exp(lin_i)) up to a constant, plus the prior.
    return -0.5 * (lin.sum() + (r2.array() * (-lin.array()).exp()).sum()) -
           0.5 * lam.squaredNorm() / prior_var;
  };
  Eigen::VectorXd lin = design_ * state_.lambda;
  double current = log_target(lin, state_.lambda);
  for (Eigen::Index j = 0; j < state_.lambda.size(); ++j) {
    const double delta = steps_[j] * rng_->normal();
    Eigen::VectorXd lam = state_.lambda;
    lam[j] += delta;
    const Eigen::VectorXd lin_new = lin + delta * design_.col(j);
    const double proposed = log_target(lin_new, lam);
    ++lambda_proposals_;
    if (std::log(rng_->uniform()) < proposed - current) {
      state_.lambda = lam;
      lin = lin_new;
      current = proposed;
      ++lambda_accepts_;
      window_accepts_[j] += 1.0;
    }
  }
  if (!adapting) return;
  if (++window_ < kAdaptWindow) return;
  ++adapt_batches_;
  const double step = std::min(0.05, 1.0 / std::sqrt(static_cast<double>(adapt_batches_)));
  for (Eigen::Index j = 0; j < steps_.size(); ++j) {
    const double rate = window_accepts_[j] / static_cast<double>(kAdaptWindow);
    steps_[j] *= std::exp(rate > kTargetAcceptance ? step : -step);
  }
  window_accepts_.setZero();
  window_ = 0;
}

void IndependenceSampler::impute_censored() {
  lgp::impute_censored(state_, data_, *rng_);
}

void IndependenceSampler::augment_ordinal() {
  lgp::augment_ordinal(state_, data_, *rng_);
}

void IndependenceSampler::sweep_core(bool adapting) {
  sample_slice_variables();
  update_component_params();
  if (config_.frozen_label) {
    update_latent_z();
  } else {
    update_labels_and_latent();
  }
  update_beta();
  update_lambda(adapting);
}

void IndependenceSampler::sweep_extensions() {
  impute_censored();
  augment_ordinal();
}

PredictiveMoments IndependenceSampler::query_moments(std::size_t q) const {
  const Eigen::VectorXd& row = query_rows_.at(q);
  return {row.dot(state_.beta), std::exp(row.dot(state_.lambda))};
}

PredictiveDraw IndependenceSampler::draw_predictive_site(Eigen::Index i) {
  return draw_predictive(
      PredictiveMoments{design_.row(i).dot(state_.beta), site_variance(i)});
}

PredictiveDraw IndependenceSampler::draw_predictive(std::size_t q) {
  return draw_predictive(query_moments(q));
}

PredictiveDraw IndependenceSampler::draw_predictive(const PredictiveMoments& m) {
  PredictiveDraw out;
  out.z = m.mean + std::sqrt(m.variance) * rng_->normal();
  out.label = label_of(out.z);
  const Component& c = state_.components.fetch(out.label, config_.priors, *rng_);
  out.y = c.mean + std::sqrt(c.variance) * rng_->normal();
  return out;
}

double IndependenceSampler::lambda_acceptance() const {
  return lambda_proposals_ == 0 ? 0.0
                                : static_cast<double>(lambda_accepts_) /
                                      static_cast<double>(lambda_proposals_);
}

}  // namespace lgp
