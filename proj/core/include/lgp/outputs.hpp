// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "lgp/model.hpp"

namespace lgp {

struct FiveNumberSummary {
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

// Linear-interpolation quantiles (type 7).
FiveNumberSummary five_number_summary(std::vector<double> values);

// Mean-square predictive error D(m) = sum_i D_i(m), estimated as the average
// over sweeps of squared gaps between observed and predicted responses.
struct CriterionReport {
  double total = 0.0;
  std::vector<double> per_observation;
  FiveNumberSummary summary;
  double mcci_half_width = 0.0;  // NaN when fewer than 100 sweeps
  long sweeps = 0;
};

// `draws` is S x n: row s holds y^pred(s) at the n training covariates.
CriterionReport estimate_criterion(const Eigen::MatrixXd& draws,
                                   const Eigen::VectorXd& y);

class CriterionAccumulator {
 public:
  CriterionAccumulator() = default;
  explicit CriterionAccumulator(Eigen::Index n) : sums_(Eigen::VectorXd::Zero(n)) {}

  void add(const Eigen::VectorXd& observed, const Eigen::VectorXd& predicted);
  // Appends another chain's sweeps.
  void merge(const CriterionAccumulator& other);

  long sweeps() const { return static_cast<long>(series_.size()); }
  // Per-sweep totals sum_i (y_i - y_i^pred(s))^2.
  const std::vector<double>& series() const { return series_; }
  CriterionReport report() const;

 private:
  Eigen::VectorXd sums_;
  std::vector<double> series_;
};

// Running moments of predictive draws at one covariate value.
class PredictiveAccumulator {
 public:
  void add(double draw);
  void merge(const PredictiveAccumulator& other);
  long count() const { return count_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }

 private:
  long count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct PredictiveEstimate {
  double mean = 0.0;
  double variance = 0.0;  // population convention (divide by S)
};

// Throws DomainError with fewer than two draws.
PredictiveEstimate predictive_moments_estimate(const PredictiveAccumulator& acc);
PredictiveEstimate predictive_moments_estimate(std::span<const double> draws);

// One posterior draw of the predictive law of z(x) and the kernels.
struct PredictiveSnapshot {
  double eta = 0.0;
  double variance = 0.0;  // 0 means z(x) is known exactly
  const ComponentTable* components = nullptr;
};

// f(y | x; zeta) on a grid. A zero variance puts all weight on
// label_of(eta).
Eigen::VectorXd conditional_density_curve(const PredictiveSnapshot& snapshot,
                                          const Eigen::VectorXd& y_grid);

// Rao-Blackwellized f_n(y | x): the average of conditional_density_curve
// over draws.
Eigen::VectorXd predictive_density_estimate(
    std::span<const PredictiveSnapshot> draws, const Eigen::VectorXd& y_grid);

class DensityAccumulator {
 public:
  DensityAccumulator() = default;
  explicit DensityAccumulator(Eigen::VectorXd y_grid)
      : grid_(std::move(y_grid)), sum_(Eigen::VectorXd::Zero(grid_.size())) {}

  void add(const Eigen::VectorXd& curve);
  void merge(const DensityAccumulator& other);
  const Eigen::VectorXd& grid() const { return grid_; }
  long count() const { return count_; }
  Eigen::VectorXd estimate() const;

 private:
  Eigen::VectorXd grid_;
  Eigen::VectorXd sum_;
  long count_ = 0;
};

// Consistent batch-means Monte Carlo confidence interval half-width for the
// mean of `series`: batch size floor(sqrt(S)), trailing remainder dropped,
// t quantile with (batches - 1) degrees of freedom. Throws DomainError when
// S < 100.
double batch_means_mcci(std::span<const double> series, double level = 0.95);

}  // namespace lgp
