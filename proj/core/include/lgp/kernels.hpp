// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <string>

namespace lgp {

enum class CorrelationFamily { SquaredExponential, PoweredExponential, SpatioTemporal };

std::string to_string(CorrelationFamily family);
CorrelationFamily parse_correlation_family(const std::string& name);

// Correlation function of the latent process.
//   squared-exponential:  exp(-phi1 ||x - x'||^2)
//   powered-exponential:  exp(-phi1 ||x - x'||^phi2)
//   spatio-temporal:      exp(-phi1 ||x - x'||^2)
//                         * exp(-.5 {||s - s'||^2 / 2 + |t - t'|^2 / 2})
// For the spatio-temporal family a site row is [x | s | t] with
// `space_dims` spatial columns and one trailing time column.
struct CorrelationSpec {
  CorrelationFamily family = CorrelationFamily::SquaredExponential;
  double phi1 = 0.5;
  double phi2 = 2.0;
  double jitter = 1e-8;
  int space_dims = 0;

  void validate() const;
};

double correlation(const CorrelationSpec& spec, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b);

double spatio_temporal_correlation(const CorrelationSpec& spec,
                                   const Eigen::VectorXd& x_a,
                                   const Eigen::VectorXd& x_b,
                                   const Eigen::VectorXd& s_a,
                                   const Eigen::VectorXd& s_b, double t_a,
                                   double t_b);

struct CorrelationMatrix {
  Eigen::MatrixXd values;  // unit diagonal plus `jitter`
  double jitter = 0.0;     // jitter actually applied
};

// Assembles the n x n correlation matrix of the rows of `sites`. The
// diagonal jitter escalates by x10 (up to 1e-4) until a Cholesky
// factorization succeeds; NumericalError otherwise.
CorrelationMatrix correlation_matrix(const CorrelationSpec& spec,
                                     const Eigen::MatrixXd& sites);

// (C(x, x_1), ..., C(x, x_n)), no jitter.
Eigen::VectorXd cross_correlation(const CorrelationSpec& spec,
                                  const Eigen::MatrixXd& sites,
                                  const Eigen::VectorXd& x);

}  // namespace lgp
