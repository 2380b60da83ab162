// Apache License, Version 2.0, refer to LICENSE.txt

#include <gtest/gtest.h>

#include <cmath>

#include "lgp/errors.hpp"
#include "lgp/kernels.hpp"
#include "lgp/random.hpp"

namespace lgp {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double e : v) out[k++] = e;
  return out;
}

TEST(Correlation, SquaredExponentialValues) {
  const CorrelationSpec se;
  EXPECT_DOUBLE_EQ(correlation(se, vec({0.3, 0.1}), vec({0.3, 0.1})), 1.0);
  EXPECT_NEAR(correlation(se, vec({0.0, 0.0}), vec({0.6, 0.8})), 0.6065306597126334, 1e-14);
}

TEST(Correlation, PoweredExponentialMatchesSe) {
  CorrelationSpec pe;
  pe.family = CorrelationFamily::PoweredExponential;
  const CorrelationSpec se;
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd a(3), b(3);
    for (int c = 0; c < 3; ++c) {
      a[c] = rng.normal();
      b[c] = rng.normal();
    }
    EXPECT_NEAR(correlation(pe, a, b), correlation(se, a, b), 1e-15);
  }
}

TEST(Correlation, SymmetricAndBounded) {
  CorrelationSpec pe;
  pe.family = CorrelationFamily::PoweredExponential;
  pe.phi1 = 1.3;
  pe.phi2 = 1.2;
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd a(2), b(2);
    for (int c = 0; c < 2; ++c) {
      a[c] = rng.normal();
      b[c] = rng.normal();
    }
    const double r = correlation(pe, a, b);
    EXPECT_EQ(r, correlation(pe, b, a));
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, 1.0);
  }
}

TEST(Correlation, DimensionMismatch) {
  EXPECT_THROW(correlation(CorrelationSpec{}, vec({1.0}), vec({1.0, 2.0})), DomainError);
}

TEST(Correlation, SpecValidation) {
  CorrelationSpec s;
  s.phi2 = 2.5;
  EXPECT_THROW(s.validate(), DomainError);
  s.phi2 = 1.0;
  s.phi1 = 0.0;
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(SpatioTemporal, DisplayedProduct) {
  CorrelationSpec st;
  st.family = CorrelationFamily::SpatioTemporal;
  const Eigen::VectorXd x = vec({0.2, 0.4});
  EXPECT_DOUBLE_EQ(spatio_temporal_correlation(st, x, x, vec({1, 1}), vec({1, 1}), 3, 3), 1.0);
  // ||s - s'||^2 = 2
  EXPECT_NEAR(spatio_temporal_correlation(st, x, x, vec({0, 0}), vec({1, 1}), 3, 3),
              0.6065306597126334, 1e-14);
  const Eigen::VectorXd x2 = vec({0.5, -0.1});
  EXPECT_NEAR(spatio_temporal_correlation(st, x, x2, vec({0, 0}), vec({0, 0}), 1, 1),
              correlation(CorrelationSpec{}, x, x2), 1e-15);
}

TEST(SpatioTemporal, SiteRowLayout) {
  CorrelationSpec st;
  st.family = CorrelationFamily::SpatioTemporal;
  st.space_dims = 2;
  // [x | s1 s2 | t]
  const Eigen::VectorXd a = vec({0.1, 0.0, 0.0, 0.0});
  const Eigen::VectorXd b = vec({0.1, 1.0, 1.0, 2.0});
  EXPECT_NEAR(correlation(st, a, b), std::exp(-0.5 * (2.0 / 2.0 + 4.0 / 2.0)), 1e-14);
}

TEST(CorrelationMatrix, SingleSiteAndDuplicates) {
  const CorrelationSpec se;
  Eigen::MatrixXd one(1, 2);
  one << 0.3, 0.7;
  const auto m1 = correlation_matrix(se, one);
  EXPECT_DOUBLE_EQ(m1.values(0, 0), 1.0 + 1e-8);

  Eigen::MatrixXd dup(2, 2);
  dup << 0.3, 0.7, 0.3, 0.7;
  const auto m2 = correlation_matrix(se, dup);
  EXPECT_DOUBLE_EQ(m2.values(0, 0), 1.0 + 1e-8);
  EXPECT_DOUBLE_EQ(m2.values(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(m2.values(1, 0), 1.0);
}

TEST(CorrelationMatrix, ElementwiseOracle) {
  const CorrelationSpec se;
  Rng rng(3);
  Eigen::MatrixXd sites(3, 2);
  for (Eigen::Index k = 0; k < sites.size(); ++k) sites.data()[k] = rng.uniform();
  const auto m = correlation_matrix(se, sites);
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 3; ++l) {
      const double d2 = (sites.row(i) - sites.row(l)).squaredNorm();
      const double expected = std::exp(-0.5 * d2) + (i == l ? 1e-8 : 0.0);
      EXPECT_NEAR(m.values(i, l), expected, 1e-15);
    }
  }
}

TEST(CorrelationMatrix, JitterEscalatesForRepeatedRows) {
  const CorrelationSpec se;
  Eigen::MatrixXd sites(50, 1);
  for (int i = 0; i < 50; ++i) sites(i, 0) = (i % 3) * 0.5;
  const auto m = correlation_matrix(se, sites);
  EXPECT_GE(m.jitter, 1e-8);
  EXPECT_LE(m.jitter, 1e-4);
  EXPECT_EQ(m.values.llt().info(), Eigen::Success);
}

TEST(CorrelationMatrix, PositiveDefiniteRandomSites) {
  const CorrelationSpec se;
  Rng rng(8);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::MatrixXd sites(50, 3);
    for (Eigen::Index k = 0; k < sites.size(); ++k) sites.data()[k] = rng.uniform();
    EXPECT_EQ(correlation_matrix(se, sites).values.llt().info(), Eigen::Success);
  }
}

TEST(CrossCorrelation, NoJitter) {
  const CorrelationSpec se;
  Eigen::MatrixXd sites(2, 1);
  sites << 0.0, 1.0;
  const Eigen::VectorXd c = cross_correlation(se, sites, vec({0.0}));
  EXPECT_DOUBLE_EQ(c[0], 1.0);
  EXPECT_NEAR(c[1], std::exp(-0.5), 1e-15);
}

TEST(CorrelationFamily, Names) {
  for (auto f : {CorrelationFamily::SquaredExponential, CorrelationFamily::PoweredExponential,
                 CorrelationFamily::SpatioTemporal}) {
    EXPECT_EQ(parse_correlation_family(to_string(f)), f);
  }
  EXPECT_THROW(parse_correlation_family("matern"), DomainError);
}

}  // namespace
}  // namespace lgp
