// Apache License, Version 2.0, refer to LICENSE.txt

#include "lgp/gp_engine.hpp"

#include <cmath>
#include <string>

#include "lgp/distributions.hpp"
#include "lgp/errors.hpp"

namespace lgp {

GpWorkspace GpWorkspace::build(const Eigen::MatrixXd& correlation,
                               double sigma_c2) {
  if (correlation.rows() != correlation.cols() || correlation.rows() < 1) {
    throw DomainError("build_workspace: correlation must be square, n >= 1");
  }
  GpWorkspace ws;
  ws.correlation_ = correlation;
  ws.llt_.compute(correlation);
  if (ws.llt_.info() != Eigen::Success) {
    throw NumericalError("build_workspace: correlation not positive definite");
  }
  const Eigen::Index n = correlation.rows();
  Eigen::MatrixXd inv = ws.llt_.solve(Eigen::MatrixXd::Identity(n, n));
  ws.precision_raw_ = 0.5 * (inv + inv.transpose());
  ws.diagonal_ = ws.precision_raw_.diagonal();
  if ((ws.diagonal_.array() <= 0.0).any()) {
    throw NumericalError("build_workspace: non-positive precision diagonal");
  }
  ws.log_det_ = 2.0 * ws.llt_.matrixLLT().diagonal().array().log().sum();
  ws.set_sigma_c2(sigma_c2);
  return ws;
}

void GpWorkspace::set_sigma_c2(double sigma_c2) {
  if (!(sigma_c2 > 0.0) || !std::isfinite(sigma_c2)) {
    throw DomainError("workspace: sigma_C^2 must be positive and finite");
  }
  sigma_c2_ = sigma_c2;
}

double GpWorkspace::raw_quadratic_form(const Eigen::VectorXd& r) const {
  return llt_.matrixL().solve(r).squaredNorm();
}

SiteConditional conditional_site(Eigen::Index i, const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& beta,
                                 const Eigen::MatrixXd& design,
                                 const GpWorkspace& workspace) {
  const Eigen::Index n = workspace.size();
  if (i < 0 || i >= n) {
    throw DomainError("conditional_site: index " + std::to_string(i) +
                      " out of range");
  }
  const Eigen::MatrixXd& psi = workspace.precision_raw();
  const double psi_ii = psi(i, i);
  double shift = 0.0;
  for (Eigen::Index l = 0; l < n; ++l) {
    if (l == i) continue;
    shift += psi(i, l) * (z[l] - design.row(l).dot(beta));
  }
  return {design.row(i).dot(beta) - shift / psi_ii,
          workspace.sigma_c2() / psi_ii};
}

PredictiveQuery prepare_query(const Eigen::VectorXd& x,
                              const Eigen::MatrixXd& sites,
                              const CorrelationSpec& spec,
                              const GpWorkspace& workspace,
                              Eigen::Index design_dim) {
  if (design_dim < 1 || design_dim - 1 > x.size()) {
    throw DomainError("prepare_query: design dimension exceeds input");
  }
  PredictiveQuery q;
  q.design_row.resize(design_dim);
  q.design_row[0] = 1.0;
  q.design_row.tail(design_dim - 1) = x.head(design_dim - 1);
  const Eigen::VectorXd c = cross_correlation(spec, sites, x);
  q.weights = workspace.precision_raw() * c;
  const double explained = workspace.raw_quadratic_form(c);
  double residual = correlation(spec, x, x) - explained;
  if (residual < 0.0) {
    if (residual < -1e-10) {
      throw NumericalError("predictive variance " + std::to_string(residual) +
                           " is negative beyond tolerance");
    }
    residual = 0.0;
  }
  q.residual_raw = residual;
  return q;
}

PredictiveMoments evaluate_query(const PredictiveQuery& query,
                                 const Eigen::VectorXd& beta,
                                 const Eigen::VectorXd& residual,
                                 double sigma_c2) {
  return {query.design_row.dot(beta) + query.weights.dot(residual),
          sigma_c2 * query.residual_raw};
}

PredictiveMoments predictive_moments(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& z,
                                     const Eigen::VectorXd& beta,
                                     const Eigen::MatrixXd& design,
                                     const Eigen::MatrixXd& sites,
                                     const GpWorkspace& workspace,
                                     const CorrelationSpec& spec) {
  const PredictiveQuery q =
      prepare_query(x, sites, spec, workspace, beta.size());
  return evaluate_query(q, beta, z - design * beta, workspace.sigma_c2());
}

double gp_logdensity(const Eigen::VectorXd& z, const Eigen::VectorXd& beta,
                     const Eigen::MatrixXd& design, const GpWorkspace& workspace) {
  const double n = static_cast<double>(z.size());
  const double s2 = workspace.sigma_c2();
  const Eigen::VectorXd r = z - design * beta;
  return -n * kLogSqrt2Pi - 0.5 * (n * std::log(s2) + workspace.log_det_correlation()) -
         0.5 * workspace.raw_quadratic_form(r) / s2;
}

}  // namespace lgp
