// Apache License, Version 2.0, refer to LICENSE.txt

#include "lgp/outputs.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

#include "lgp/distributions.hpp"
#include "lgp/errors.hpp"

namespace lgp {

namespace {

double quantile_type7(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

CriterionReport make_report(const Eigen::VectorXd& sums, long sweeps,
                            const std::vector<double>* series) {
  if (sweeps < 1) throw DomainError("criterion: no retained sweeps");
  CriterionReport r;
  r.sweeps = sweeps;
  r.per_observation.resize(static_cast<std::size_t>(sums.size()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < sums.size(); ++i) {
    const double di = sums[i] / static_cast<double>(sweeps);
    r.per_observation[static_cast<std::size_t>(i)] = di;
    total += di;
  }
  r.total = total;
  r.summary = five_number_summary(r.per_observation);
  r.mcci_half_width = std::numeric_limits<double>::quiet_NaN();
  if (series != nullptr && series->size() >= 100) {
    r.mcci_half_width = batch_means_mcci(*series);
  }
  return r;
}

}  // namespace

FiveNumberSummary five_number_summary(std::vector<double> values) {
  if (values.empty()) throw DomainError("five_number_summary: no values");
  std::sort(values.begin(), values.end());
  return {values.front(), quantile_type7(values, 0.25),
          quantile_type7(values, 0.5), quantile_type7(values, 0.75),
          values.back()};
}

CriterionReport estimate_criterion(const Eigen::MatrixXd& draws,
                                   const Eigen::VectorXd& y) {
  if (draws.rows() < 1) throw DomainError("criterion: no retained sweeps");
  if (draws.cols() != y.size()) {
    throw DomainError("criterion: draws must cover every observation");
  }
  CriterionAccumulator acc(y.size());
  for (Eigen::Index s = 0; s < draws.rows(); ++s) {
    acc.add(y, draws.row(s).transpose());
  }
  return acc.report();
}

void CriterionAccumulator::add(const Eigen::VectorXd& observed,
                               const Eigen::VectorXd& predicted) {
  if (observed.size() != sums_.size() || predicted.size() != sums_.size()) {
    throw DomainError("criterion: size mismatch");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < sums_.size(); ++i) {
    const double e = observed[i] - predicted[i];
    sums_[i] += e * e;
    total += e * e;
  }
  series_.push_back(total);
}

void CriterionAccumulator::merge(const CriterionAccumulator& other) {
  if (sums_.size() == 0 && series_.empty()) {
    *this = other;
    return;
  }
  if (other.sums_.size() != sums_.size()) {
    throw DomainError("criterion: cannot merge different data sets");
  }
  sums_ += other.sums_;
  series_.insert(series_.end(), other.series_.begin(), other.series_.end());
}

CriterionReport CriterionAccumulator::report() const {
  return make_report(sums_, sweeps(), &series_);
}

void PredictiveAccumulator::add(double draw) {
  ++count_;
  const double delta = draw - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (draw - mean_);
}

void PredictiveAccumulator::merge(const PredictiveAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double n = static_cast<double>(count_ + other.count_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.count_) / n;
  m2_ += other.m2_ + delta * delta * static_cast<double>(count_) *
                         static_cast<double>(other.count_) / n;
  count_ += other.count_;
}

PredictiveEstimate predictive_moments_estimate(const PredictiveAccumulator& acc) {
  if (acc.count() < 2) {
    throw DomainError("predictive moments: need at least two draws");
  }
  return {acc.mean(), std::max(0.0, acc.m2() / static_cast<double>(acc.count()))};
}

PredictiveEstimate predictive_moments_estimate(std::span<const double> draws) {
  if (draws.size() < 2) {
    throw DomainError("predictive moments: need at least two draws");
  }
  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= static_cast<double>(draws.size());
  double ss = 0.0;
  for (double d : draws) ss += (d - mean) * (d - mean);
  return {mean, ss / static_cast<double>(draws.size())};
}

Eigen::VectorXd conditional_density_curve(const PredictiveSnapshot& snapshot,
                                          const Eigen::VectorXd& y_grid) {
  if (snapshot.components == nullptr) {
    throw DomainError("density: snapshot without components");
  }
  Eigen::VectorXd curve(y_grid.size());
  if (snapshot.variance <= 0.0) {
    const Component& c = snapshot.components->at(label_of(snapshot.eta));
    for (Eigen::Index g = 0; g < y_grid.size(); ++g) {
      curve[g] = std::exp(normal_logpdf(y_grid[g], c.mean, c.variance));
    }
    return curve;
  }
  const auto [lo, hi] = mixture_window(snapshot.eta, snapshot.variance);
  std::vector<double> weights;
  std::vector<const Component*> comps;
  double mass = 0.0;
  for (int j = lo; j <= hi; ++j) {
    const double w = mixture_weight(j, snapshot.eta, snapshot.variance);
    if (w == 0.0) continue;
    weights.push_back(w);
    comps.push_back(&snapshot.components->at(j));
    mass += w;
  }
  if (mass < 1.0 - 1e-6) {
    throw TruncationError("density: truncation covers weight mass " +
                          std::to_string(mass));
  }
  for (Eigen::Index g = 0; g < y_grid.size(); ++g) {
    double f = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      f += weights[k] *
           std::exp(normal_logpdf(y_grid[g], comps[k]->mean, comps[k]->variance));
    }
    curve[g] = f;
  }
  return curve;
}

Eigen::VectorXd predictive_density_estimate(
    std::span<const PredictiveSnapshot> draws, const Eigen::VectorXd& y_grid) {
  if (draws.empty()) throw DomainError("density: no draws");
  DensityAccumulator acc(y_grid);
  for (const auto& s : draws) acc.add(conditional_density_curve(s, y_grid));
  return acc.estimate();
}

void DensityAccumulator::add(const Eigen::VectorXd& curve) {
  if (curve.size() != grid_.size()) throw DomainError("density: grid mismatch");
  sum_ += curve;
  ++count_;
}

void DensityAccumulator::merge(const DensityAccumulator& other) {
  if (count_ == 0 && grid_.size() == 0) {
    *this = other;
    return;
  }
  if (other.grid_.size() != grid_.size()) {
    throw DomainError("density: grid mismatch");
  }
  sum_ += other.sum_;
  count_ += other.count_;
}

Eigen::VectorXd DensityAccumulator::estimate() const {
  if (count_ == 0) throw DomainError("density: no draws");
  return sum_ / static_cast<double>(count_);
}

double batch_means_mcci(std::span<const double> series, double level) {
  const std::size_t s = series.size();
  if (s < 100) {
    throw DomainError("batch_means_mcci: series of length " +
                      std::to_string(s) + " is too short (need >= 100)");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("batch_means_mcci: level must lie in (0, 1)");
  }
  const auto size = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(s))));
  const std::size_t batches = s / size;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < size; ++k) sum += series[b * size + k];
    means[b] = sum / static_cast<double>(size);
  }
  // Shifted by the first batch mean so a constant series gives exactly 0.
  double shift = 0.0;
  for (double m : means) shift += m - means[0];
  shift /= static_cast<double>(batches);
  double ss = 0.0;
  for (double m : means) {
    const double dev = (m - means[0]) - shift;
    ss += dev * dev;
  }
  const double batch_var = ss / static_cast<double>(batches - 1);
  boost::math::students_t t(static_cast<double>(batches - 1));
  const double q = boost::math::quantile(t, 0.5 + 0.5 * level);
  return q * std::sqrt(batch_var / static_cast<double>(batches));
}

}  // namespace lgp
