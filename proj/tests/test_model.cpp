// Apache License, Version 2.0, refer to LICENSE.txt

#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>

#include "lgp/errors.hpp"
#include "lgp/model.hpp"

namespace lgp {
namespace {

double phi(double t) { return boost::math::cdf(boost::math::normal(), t); }

TEST(LabelOf, RightClosedIntervals) {
  EXPECT_EQ(label_of(0.5), 1);
  EXPECT_EQ(label_of(1.0), 1);
  EXPECT_EQ(label_of(-0.3), 0);
  EXPECT_EQ(label_of(0.0), 0);
  EXPECT_EQ(label_of(-1.0), -1);
  EXPECT_EQ(label_of(-1.0 + 1e-12), 0);
}

TEST(LabelOf, InverseOfMembership) {
  for (int j = -20; j <= 20; ++j) {
    for (double f : {1e-9, 0.25, 0.5, 0.999, 1.0}) {
      EXPECT_EQ(label_of(j - 1.0 + f), j) << j << " " << f;
    }
  }
}

TEST(LabelOf, RejectsNonFinite) {
  EXPECT_THROW(label_of(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(label_of(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(MixtureWeight, StandardNormalInterval) {
  EXPECT_NEAR(mixture_weight(0, 0.0, 1.0), 0.34134474606854293, 1e-12);
  EXPECT_NEAR(mixture_weight(0, 0.0, 1.0), phi(0.0) - phi(-1.0), 1e-14);
}

TEST(MixtureWeight, PointMassAndTail) {
  EXPECT_NEAR(mixture_weight(1, 0.5, 1e-14), 1.0, 1e-12);
  EXPECT_LT(mixture_weight(0, 10.0, 1.0), 1e-15);
  EXPECT_GE(mixture_weight(0, 10.0, 1.0), 0.0);
}

TEST(MixtureWeight, RejectsNonPositiveVariance) {
  EXPECT_THROW(mixture_weight(0, 0.0, 0.0), DomainError);
  EXPECT_THROW(mixture_weight(0, 0.0, -1.0), DomainError);
}

TEST(MixtureWeight, TruncationDeficit) {
  for (double eta : {-7.3, -0.5, 0.0, 2.2, 11.0}) {
    for (double v : {0.01, 0.3, 1.0, 10.0, 100.0}) {
      const int J = default_truncation(eta, v);
      double sum = 0.0;
      for (int j = -J; j <= J; ++j) sum += mixture_weight(j, eta, v);
      EXPECT_NEAR(sum, 1.0, 1e-12) << eta << " " << v;
    }
  }
}

TEST(MixtureDensity, SingleEffectiveComponent) {
  ComponentTable t;
  for (int j = -3; j <= 3; ++j) t.set(j, {0.0, 1.0});
  EXPECT_NEAR(mixture_density(0.0, 0.5, 1e-8, t), 0.3989422804014327, 1e-10);
}

TEST(MixtureDensity, IdenticalComponentsGiveCommonDensity) {
  ComponentTable t;
  for (int j = -12; j <= 12; ++j) t.set(j, {0.7, 2.0});
  const double expected = std::exp(-0.5 * (1.5 - 0.7) * (1.5 - 0.7) / 2.0) /
                          std::sqrt(2.0 * M_PI * 2.0);
  EXPECT_NEAR(mixture_density(1.5, 0.3, 1.0, t), expected, 1e-12);
}

TEST(MixtureDensity, BruteForceTwoComponents) {
  ComponentTable t;
  for (int j = -12; j <= 12; ++j) t.set(j, {j <= 0 ? -0.5 : 0.5, 1.0});
  double expected = 0.0;
  for (int j = -12; j <= 12; ++j) {
    const double w = phi(j) - phi(j - 1.0);
    const double m = j <= 0 ? -0.5 : 0.5;
    expected += w * std::exp(-0.5 * m * m) / std::sqrt(2.0 * M_PI);
  }
  EXPECT_NEAR(mixture_density(0.0, 0.0, 1.0, t), expected, 1e-12);
}

TEST(MixtureDensity, IntegratesToOne) {
  ComponentTable t;
  for (int j = -20; j <= 20; ++j) t.set(j, {0.3 * j - 1.0, 0.2 + 0.01 * (j + 20)});
  const double lo = -20.0, hi = 20.0;
  const int m = 40000;
  const double h = (hi - lo) / m;
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double w = (k == 0 || k == m) ? 0.5 : 1.0;
    sum += w * mixture_density(lo + k * h, 0.4, 2.5, t);
  }
  EXPECT_NEAR(sum * h, 1.0, 1e-6);
}

TEST(MixtureDensity, ShortTruncationThrows) {
  ComponentTable t;
  for (int j = -2; j <= 2; ++j) t.set(j, {0.0, 1.0});
  EXPECT_THROW(mixture_density(0.0, 0.0, 25.0, t, 2), TruncationError);
}

TEST(ComponentTable, FetchDrawsFromPriorOnce) {
  Priors p = Priors::defaults(1);
  Rng rng(4);
  ComponentTable t;
  EXPECT_FALSE(t.contains(3));
  const Component first = t.fetch(3, p, rng);
  EXPECT_TRUE(t.contains(3));
  EXPECT_EQ(t.fetch(3, p, rng).mean, first.mean);
  t.ensure_range(-2, 2, p, rng);
  EXPECT_EQ(t.size(), 6u);
  t.prune_outside(1);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_THROW(t.at(5), DomainError);
}

TEST(Standardize, MeanZeroUnitVariance) {
  Eigen::MatrixXd x(5, 2);
  x << 1, 10, 2, 20, 3, 35, 4, 40, 5, 52;
  const Standardization s = standardize_columns(x);
  for (int c = 0; c < 2; ++c) {
    EXPECT_NEAR(x.col(c).mean(), 0.0, 1e-12);
    const double var = (x.col(c).array() - x.col(c).mean()).square().sum() / 4.0;
    EXPECT_NEAR(var, 1.0, 1e-10);
  }
  Eigen::VectorXd raw(2);
  raw << 3, 35;
  EXPECT_NEAR((s.apply(raw) - x.row(2).transpose()).norm(), 0.0, 1e-14);
}

TEST(Standardize, ZeroVarianceColumn) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 4, 2, 4, 3, 4;
  try {
    standardize_columns(x);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("zero variance column"), std::string::npos);
  }
}

TEST(Priors, Validation) {
  Priors p = Priors::defaults(2);
  EXPECT_NO_THROW(p.validate(2));
  EXPECT_THROW(p.validate(3), DomainError);
  p.sigma_rate = 0.0;
  EXPECT_THROW(p.validate(2), DomainError);
}

TEST(Dataset, ValidateShapes) {
  Dataset d;
  d.y = Eigen::VectorXd::Zero(3);
  d.x = Eigen::MatrixXd::Zero(2, 1);
  EXPECT_THROW(d.validate(), DomainError);
  d.x = Eigen::MatrixXd::Zero(3, 1);
  EXPECT_NO_THROW(d.validate());
}

}  // namespace
}  // namespace lgp
