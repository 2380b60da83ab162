// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>

#include "lgp/kernels.hpp"

namespace lgp {

// Factorized correlation matrix C of the latent process at the training
// sites together with its inverse. The process covariance is sigma_C^2 C,
// so the precision is Psi = Psi_raw / sigma_C^2 and changing sigma_C^2 never
// needs a new factorization.
class GpWorkspace {
 public:
  GpWorkspace() = default;

  // Throws NumericalError when `correlation` is not positive definite.
  static GpWorkspace build(const Eigen::MatrixXd& correlation, double sigma_c2);

  void set_sigma_c2(double sigma_c2);
  double sigma_c2() const { return sigma_c2_; }
  Eigen::Index size() const { return correlation_.rows(); }

  const Eigen::MatrixXd& correlation() const { return correlation_; }
  const Eigen::MatrixXd& precision_raw() const { return precision_raw_; }
  Eigen::MatrixXd precision() const { return precision_raw_ / sigma_c2_; }
  const Eigen::VectorXd& precision_raw_diagonal() const { return diagonal_; }
  const Eigen::LLT<Eigen::MatrixXd>& factor() const { return llt_; }
  double log_det_correlation() const { return log_det_; }

  // ||L^{-1} r||^2 = r^T C^{-1} r
  double raw_quadratic_form(const Eigen::VectorXd& r) const;

 private:
  Eigen::MatrixXd correlation_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::MatrixXd precision_raw_;
  Eigen::VectorXd diagonal_;
  double log_det_ = 0.0;
  double sigma_c2_ = 1.0;
};

struct SiteConditional {
  double mean = 0.0;
  double variance = 0.0;
};

// Law of z_i given z_{-i}:
//   mean (1, x_i^T) beta + sum_{l != i} (-psi_il / psi_ii)(z_l - (1, x_l^T) beta)
//   variance 1 / psi_ii
SiteConditional conditional_site(Eigen::Index i, const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& beta,
                                 const Eigen::MatrixXd& design,
                                 const GpWorkspace& workspace);

// Same quantity from a cached w = Psi_raw (z - X beta); O(1).
inline SiteConditional conditional_site_cached(Eigen::Index i, double mean_i,
                                               double residual_i, double w_i,
                                               const GpWorkspace& workspace) {
  const double psi_ii = workspace.precision_raw_diagonal()[i];
  return {mean_i + residual_i - w_i / psi_ii, workspace.sigma_c2() / psi_ii};
}

struct PredictiveMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Everything about an out-of-sample point that depends only on C. Stays
// valid until the correlation parameters change.
struct PredictiveQuery {
  Eigen::VectorXd design_row;  // (1, x^T)
  Eigen::VectorXd weights;     // Psi_raw c(x)
  double residual_raw = 0.0;   // C(x, x) - c(x)^T Psi_raw c(x), clamped at 0
};

// `x` is a kernel input row; the leading `design_dim - 1` entries are the
// regression covariates. Throws NumericalError when the residual variance is
// below -1e-10.
PredictiveQuery prepare_query(const Eigen::VectorXd& x,
                              const Eigen::MatrixXd& sites,
                              const CorrelationSpec& spec,
                              const GpWorkspace& workspace,
                              Eigen::Index design_dim);

// mu*(x) = (1, x^T) beta + c^T Psi_raw (z - X beta),
// sigma*(x) = sigma_C^2 (C(x, x) - c^T Psi_raw c).
PredictiveMoments evaluate_query(const PredictiveQuery& query,
                                 const Eigen::VectorXd& beta,
                                 const Eigen::VectorXd& residual,
                                 double sigma_c2);

PredictiveMoments predictive_moments(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& z,
                                     const Eigen::VectorXd& beta,
                                     const Eigen::MatrixXd& design,
                                     const Eigen::MatrixXd& sites,
                                     const GpWorkspace& workspace,
                                     const CorrelationSpec& spec);

// log n(z | X beta, sigma_C^2 C) from the cached factorization.
double gp_logdensity(const Eigen::VectorXd& z, const Eigen::VectorXd& beta,
                     const Eigen::MatrixXd& design, const GpWorkspace& workspace);

}  // namespace lgp
