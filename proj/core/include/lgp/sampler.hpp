// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "lgp/gp_engine.hpp"
#include "lgp/kernels.hpp"
#include "lgp/model.hpp"
#include "lgp/outputs.hpp"
#include "lgp/random.hpp"

namespace lgp {

enum class ModelKind { Gp, Independence };
enum class PhiMode { Fixed, RandomWalk };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct SamplerConfig {
  ModelKind model = ModelKind::Gp;
  long sweeps = 20000;
  long burnin = 10000;
  long thin = 10;
  Priors priors;
  CorrelationSpec kernel;
  PhiMode phi_mode = PhiMode::Fixed;
  double phi_step = 0.1;     // random-walk s.d. on log phi1 (and logit phi2/2)
  double lambda_step = 0.1;  // independence model, initial random-walk s.d.
  // Out-of-sample covariate rows on the model scale (standardized, with
  // any spatial/time columns appended).
  std::vector<Eigen::VectorXd> query_points;
  // Response grid for Rao-Blackwellized densities at the query points;
  // empty disables them. Densities use thinned sweeps only.
  Eigen::VectorXd y_grid;
  // Pins every label to this value and skips label updates.
  std::optional<int> frozen_label;
  // Initial labels spread the rank quantiles of y over (-r, r).
  double initial_label_range = 2.0;
  // Elliptical slice moves on z per sweep (GP model, labels not frozen).
  int joint_moves = 1;
  bool store_draws = true;

  void validate(Eigen::Index p) const;
};

// State shared by both models. `y` holds the working responses: observed
// values, current imputations of censored values, or ordinal latents.
struct LatentState {
  Eigen::VectorXi d;
  Eigen::VectorXd u;
  Eigen::VectorXd z;
  Eigen::VectorXd beta;
  Eigen::VectorXd y;
  ComponentTable components;
  int nmax = 0;
};

struct ChainState : LatentState {
  double sigma_c2 = 1.0;
  double phi1 = 0.5;
  double phi2 = 2.0;
};

struct IndependenceState : LatentState {
  Eigen::VectorXd lambda;
};

// --- steps shared by both samplers --------------------------------------

// u_i ~ u(0, exp(-|d_i|)).
void sample_slice_variables(LatentState& state, Rng& rng);

// Largest |j| with u < exp(-|j|).
int slice_bound(double u);

// max_i slice_bound(u_i). Throws DomainError unless every u_i is in (0, 1).
int compute_nmax(std::span<const double> u);

// Conjugate draws of (mu_j, sigma_j^2) for every |j| <= state.nmax given the
// observations labelled j; labels outside that range are dropped.
void update_component_params(LatentState& state, const Priors& priors,
                             Rng& rng);

// Draws a label from Pr(d = j) proportional to
//   1(u < xi_j) xi_j^{-1} n(y | mu_j, sigma_j^2) P(z in (j-1, j])
// with z ~ n(eta, variance). Normalized in log space.
int draw_label(double y, double u, double eta, double variance,
               const ComponentTable& components, Rng& rng);

// z ~ n(eta, variance) truncated to (label - 1, label].
double draw_latent(int label, double eta, double variance, Rng& rng);

// Censored rows: y_i ~ n(mu_{d_i}, sigma_{d_i}^2) truncated to (a_i, b_i].
void impute_censored(LatentState& state, const Dataset& data, Rng& rng);

// Cut set A(c): (-inf, 0] for c = 0, (c - 1, c] for 0 < c < max,
// (max - 1, inf) for c = max.
Interval ordinal_set(int category, int max_category);
int ordinal_category(double latent, int max_category);

// Ordinal rows: y*_i ~ n(mu_{d_i}, sigma_{d_i}^2) truncated to A(y_i).
void augment_ordinal(LatentState& state, const Dataset& data, Rng& rng);

// Working responses, rank-quantile labels spread over (-r, r) and z at the
// midpoint of each label's interval.
void initialize_latent(LatentState& state, const Dataset& data,
                       std::optional<int> frozen_label, double label_range = 2.0);

struct SupportReport {
  long checks = 0;
  long slice = 0;     // u_i >= exp(-|d_i|) or u_i <= 0
  long interval = 0;  // z_i outside (d_i - 1, d_i]
  long nmax = 0;      // |d_i| > nmax
  long censored = 0;  // imputation outside its interval
  long ordinal = 0;   // latent outside A(y_i)

  long violations() const { return slice + interval + nmax + censored + ordinal; }
  void merge(const SupportReport& other);
};

void check_support(const LatentState& state, const Dataset& data,
                   SupportReport& report);

struct PredictiveDraw {
  double y = 0.0;
  double z = 0.0;
  int label = 0;
};

// Posterior moments of (beta, sigma_C^2) from the normal / inverse-gamma
// conjugacy of beta | sigma_C^2 ~ n(m, sigma_C^2 Sigma) and
// z | beta, sigma_C^2 ~ n(X beta, sigma_C^2 C):
//   V* = (Sigma^{-1} + X^T C^{-1} X)^{-1},  m* = V* (Sigma^{-1} m + X^T C^{-1} z)
//   sigma_C^{-2} | z ~ ga(a + n/2, b + q/2), beta integrated out, with
//   q = z^T C^{-1} z + m^T Sigma^{-1} m - m*^T V*^{-1} m*
//     = (z - X m*)^T C^{-1} (z - X m*) + (m* - m)^T Sigma^{-1} (m* - m)
// The second form is what is evaluated; both terms are nonnegative.
struct BetaSigmaPosterior {
  Eigen::VectorXd mean;      // m*
  Eigen::MatrixXd cov_raw;   // V*, to be scaled by sigma_C^2
  double shape = 0.0;
  double rate = 0.0;
};

BetaSigmaPosterior beta_sigma_posterior(const Eigen::VectorXd& z,
                                        const Eigen::MatrixXd& design,
                                        const Eigen::MatrixXd& precision_raw,
                                        const Priors& priors);

// --- dependent GP model ---------------------------------------------------

class GpSampler {
 public:
  GpSampler(const Dataset& data, const SamplerConfig& config, Rng& rng);

  ChainState& state() { return state_; }
  const ChainState& state() const { return state_; }
  const GpWorkspace& workspace() const { return workspace_; }
  const Eigen::MatrixXd& design() const { return design_; }
  const Eigen::MatrixXd& sites() const { return sites_; }
  CorrelationSpec current_kernel() const;

  void sample_slice_variables();
  void update_component_params();
  // All z_i in order given the labels, each from its freshest conditional.
  void update_latent_z();
  // Site-by-site block update: d_i with z_i integrated out, then z_i | d_i.
  void update_labels_and_latent();
  // Elliptical slice move on the whole vector z, labels following
  // d_i = label_of(z_i). Moves along the process prior, so it keeps mixing
  // when strong correlation pins each single-site conditional.
  void update_latent_joint();
  // sigma_C^2 | z with beta integrated out.
  void update_sigma_c();
  // beta | sigma_C^2, z.
  void update_beta();
  // Random-walk Metropolis on phi; no-op in fixed mode.
  void update_phi();
  void impute_censored();
  void augment_ordinal();

  // Core of one sweep, in order: u, N_max, components, labels and z,
  // sigma_C^2, beta, phi.
  void sweep_core();
  // Censoring and ordinal steps, run after the predictive draws.
  void sweep_extensions();

  SiteConditional site_conditional(Eigen::Index i) const;
  PredictiveMoments query_moments(std::size_t q) const;
  // z(x_i) at a training covariate is the state's z_i itself.
  PredictiveDraw draw_predictive_site(Eigen::Index i);
  PredictiveDraw draw_predictive(std::size_t q);
  PredictiveDraw draw_predictive(const PredictiveMoments& moments);
  // Moments for a new point, computed without the query cache.
  PredictiveMoments predictive_at(const Eigen::VectorXd& x) const;

  double phi_acceptance() const;
  void rebuild_correlation(double phi1, double phi2);

 private:
  void refresh_residuals();

  const Dataset& data_;
  SamplerConfig config_;
  Rng* rng_;
  Eigen::MatrixXd design_;
  Eigen::MatrixXd sites_;
  GpWorkspace workspace_;
  std::vector<PredictiveQuery> queries_;
  Eigen::VectorXd mean_;      // X beta
  Eigen::VectorXd w_;         // Psi_raw (z - X beta)
  ChainState state_;
  long phi_proposals_ = 0;
  long phi_accepts_ = 0;
};

// --- independence model ---------------------------------------------------

class IndependenceSampler {
 public:
  IndependenceSampler(const Dataset& data, const SamplerConfig& config,
                      Rng& rng);

  IndependenceState& state() { return state_; }
  const IndependenceState& state() const { return state_; }
  const Eigen::MatrixXd& design() const { return design_; }

  // exp((1, x_i^T) lambda)
  double site_variance(Eigen::Index i) const;

  void sample_slice_variables();
  void update_component_params();
  void update_labels_and_latent();
  void update_latent_z();
  // beta | lambda, z: weighted least squares conjugate draw.
  void update_beta();
  // Componentwise random-walk Metropolis; proposal scales adapt while
  // `adapting` is true.
  void update_lambda(bool adapting);
  void impute_censored();
  void augment_ordinal();

  void sweep_core(bool adapting);
  void sweep_extensions();

  PredictiveMoments query_moments(std::size_t q) const;
  PredictiveDraw draw_predictive_site(Eigen::Index i);
  PredictiveDraw draw_predictive(std::size_t q);
  PredictiveDraw draw_predictive(const PredictiveMoments& moments);

  const Eigen::VectorXd& lambda_steps() const { return steps_; }
  double lambda_acceptance() const;

 private:
  const Dataset& data_;
  SamplerConfig config_;
  Rng* rng_;
  Eigen::MatrixXd design_;
  std::vector<Eigen::VectorXd> query_rows_;
  IndependenceState state_;
  Eigen::VectorXd steps_;
  Eigen::VectorXd window_accepts_;
  long window_ = 0;
  long adapt_batches_ = 0;
  long lambda_proposals_ = 0;
  long lambda_accepts_ = 0;
};

// --- chain driver -----------------------------------------------------------

struct TraceRow {
  long sweep = 0;
  int nmax = 0;
  int occupied = 0;
  double sigma_c2 = 0.0;  // GP model
  double phi1 = 0.0;
  double phi2 = 0.0;
  Eigen::VectorXd beta;
  Eigen::VectorXd lambda;  // independence model
  double criterion = 0.0;  // sum_i (y_i - y_i^pred)^2 at this sweep
};

// Enough of one retained sweep to redo the predictive step at new points.
struct PosteriorDraw {
  long sweep = 0;
  double sigma_c2 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  Eigen::VectorXd beta;
  Eigen::VectorXd lambda;
  Eigen::VectorXd z;
  ComponentTable components;
};

struct ChainOutput {
  ModelKind model = ModelKind::Gp;
  long retained = 0;
  std::vector<TraceRow> trace;
  std::vector<PosteriorDraw> draws;
  CriterionAccumulator criterion;
  std::vector<PredictiveAccumulator> predictive;
  std::vector<DensityAccumulator> densities;
  SupportReport support;
  double acceptance = 0.0;  // phi (GP, random-walk mode) or lambda
};

// Responses the criterion compares against: working y for continuous and
// censored rows, the observed category for ordinal rows.
Eigen::VectorXd criterion_reference(const LatentState& state,
                                    const Dataset& data);

// Runs `config.sweeps` sweeps, keeping everything after `config.burnin`.
// Step failures surface as SamplerError carrying the sweep index.
ChainOutput run_chain(const Dataset& data, const SamplerConfig& config,
                      Rng& rng);

}  // namespace lgp
