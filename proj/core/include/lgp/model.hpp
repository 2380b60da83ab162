// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lgp/random.hpp"

namespace lgp {

// Half-open interval (lower, upper].
struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return v > lower && v <= upper; }
};

struct Standardization {
  std::vector<double> mean;
  std::vector<double> sd;

  // Maps a raw covariate row onto the standardized scale.
  Eigen::VectorXd apply(const Eigen::VectorXd& raw) const;
};

// Responses and covariates. `x` holds covariates as used by the model
// (standardized when `standardization` is set). Optional `coords` carries
// spatial columns followed by a time column for the spatio-temporal kernel;
// they enter the GP correlation only.
struct Dataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;
  Eigen::MatrixXd coords;
  std::vector<std::optional<Interval>> censoring;  // empty or one per row
  std::vector<int> ordinal_max;                    // empty or one per row
  std::optional<Standardization> standardization;
  std::string response_name = "y";
  std::vector<std::string> covariate_names;

  Eigen::Index size() const { return y.size(); }
  Eigen::Index dim() const { return x.cols(); }
  bool has_censoring() const { return !censoring.empty(); }
  bool is_ordinal() const { return !ordinal_max.empty(); }

  // [x | coords], the rows the correlation function sees.
  Eigen::MatrixXd kernel_inputs() const;

  // Throws DomainError when shapes or invariants are violated.
  void validate() const;
};

// z-standardize the columns of x in place (sample sd, n - 1 denominator).
// Throws DomainError on a zero-variance column.
Standardization standardize_columns(Eigen::MatrixXd& x);

// Intercept-augmented design (1, x_i^T).
Eigen::MatrixXd intercept_design(const Eigen::MatrixXd& x);

// Label j of the unit interval (j-1, j] containing v.
int label_of(double v);

// Probability that n(eta, variance) falls in (j-1, j].
double mixture_weight(int j, double eta, double variance);

// Truncation half-width so that labels |j| <= J carry all but 1e-12 of the
// weight mass: ceil(|eta| + 8 sqrt(variance)).
int default_truncation(double eta, double variance);

struct Component {
  double mean = 0.0;
  double variance = 1.0;
};

struct Priors {
  double mu_mean = 0.0;       // normal prior on component means
  double mu_var = 10.0;
  double sigma_shape = 1.0;   // gamma (shape, rate) on component precisions
  double sigma_rate = 1e-3;
  Eigen::VectorXd beta_mean;  // beta | sigma_C^2 ~ n(beta_mean, sigma_C^2 beta_cov)
  Eigen::MatrixXd beta_cov;
  double c_shape = 1.0;       // gamma (shape, rate) on sigma_C^{-2}
  double c_rate = 1e4;
  double log_phi1_mean = std::log(0.5);  // log phi_1 ~ n(., .) when phi is random
  double log_phi1_sd = 1.0;
  double lambda_var = 1e5;    // independence model: lambda ~ n(0, lambda_var I)

  // Prior settings used for the real-data illustration, for p covariates.
  static Priors defaults(Eigen::Index p);

  void validate(Eigen::Index p) const;
};

// Sparse map from label to kernel parameters. Labels that are not stored are
// drawn from the prior the first time they are fetched.
class ComponentTable {
 public:
  using Map = std::map<int, Component>;

  bool contains(int j) const { return entries_.count(j) != 0; }
  const Component& at(int j) const;
  void set(int j, const Component& c);
  const Component& fetch(int j, const Priors& priors, Rng& rng);
  void ensure_range(int lo, int hi, const Priors& priors, Rng& rng);
  // Drop every label with |j| > bound.
  void prune_outside(int bound);
  std::size_t size() const { return entries_.size(); }
  const Map& entries() const { return entries_; }
  void clear() { entries_.clear(); }

 private:
  Map entries_;
};

Component draw_component_from_prior(const Priors& priors, Rng& rng);

// sum_{|j| <= J} w_j n(y | mu_j, sigma_j^2), J defaulting to
// default_truncation. Labels more than 9 standard deviations from eta
// (joint mass below 1e-18) are skipped; every other label in range must be
// present in `components` (see mixture_window). Throws TruncationError when
// the covered weight mass is below 1 - 1e-6.
double mixture_density(double y, double eta, double variance,
                       const ComponentTable& components,
                       std::optional<int> truncation = std::nullopt);

// Labels [lo, hi] that mixture_density reads for these arguments.
std::pair<int, int> mixture_window(double eta, double variance,
                                   std::optional<int> truncation = std::nullopt);

}  // namespace lgp
