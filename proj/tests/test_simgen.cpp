// Apache License, Version 2.0, refer to LICENSE.txt

#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "lgp/errors.hpp"
#include "lgp/simgen.hpp"

namespace lgp::sim {
namespace {

Eigen::VectorXd point(std::initializer_list<double> head, Eigen::Index dim) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  Eigen::Index k = 0;
  for (double v : head) x[k++] = v;
  return x;
}

TEST(MeanE1, VanishingSet) {
  for (double x2 : {0.0, 0.3, 0.9}) EXPECT_NEAR(mean_e1(point({0.6, x2}, 2)), 2.565, 1e-12);
  for (double x1 : {0.0, 0.25, 1.0}) EXPECT_NEAR(mean_e1(point({x1, 0.0}, 2)), 2.565, 1e-12);
}

TEST(MeanE1, IndependentEvaluation) {
  const double x1 = 0.2, x2 = 0.5;
  const double expected =
      1.9 * (1.35 + std::exp(x1) * std::sin(13.0 * (x1 - 0.6) * (x1 - 0.6)) * std::exp(-x2) *
                        std::sin(7.0 * x2));
  EXPECT_NEAR(mean_e1(point({x1, x2}, 2)), expected, 1e-14);
}

TEST(MeanE2, PiecewisePowers) {
  EXPECT_NEAR(mean_e2(point({0.5, 0.0}, 10)), 0.0, 1e-14);
  EXPECT_NEAR(mean_e2(point({0.6, 0.0}, 10)), 0.28, 1e-14);
  EXPECT_NEAR(mean_e2(point({0.1, 0.0}, 10)) - (-0.2), 1.0, 1e-14);
}

TEST(MeanE3, Values) {
  EXPECT_EQ(mean_e3(point({0, 0, 0, 0}, 10)), 0.0);
  const double t = 5.0 / std::sqrt(7.0);
  EXPECT_NEAR(mean_e3(point({1, 1, 1, 1}, 10)), t * t * std::exp(t), 1e-12);
  EXPECT_NEAR(mean_e3(point({1, 1, 1, 1}, 10)), 23.6, 0.05);
  EXPECT_GE(mean_e3(point({-1, -2, 0, 0}, 10)), 0.0);
}

TEST(MeanE4, Values) {
  const Eigen::VectorXd half = Eigen::VectorXd::Constant(10, 0.5);
  EXPECT_NEAR(mean_e4(half), 10.0 * std::sin(M_PI / 4.0) + 7.5, 1e-12);
  EXPECT_NEAR(mean_e4(half), 14.571, 1e-3);
  EXPECT_NEAR(mean_e4(point({0, 0.7, 0.5, 0, 0}, 10)), 0.0, 1e-14);
  Eigen::VectorXd moved = half;
  moved[6] = 0.99;
  EXPECT_EQ(mean_e4(moved), mean_e4(half));
}

TEST(ModeCount, Clamps) {
  EXPECT_EQ(mode_count(Eigen::VectorXd::Zero(10)), 1);
  EXPECT_EQ(mode_count(point({1, 1, 0, 0, 1}, 10)), 4);
  EXPECT_EQ(mode_count(point({0.5, 0, 0, 0, 0.5}, 10)), 2);
  EXPECT_NEAR(mean_e5(point({1, 1, 0, 0, 1}, 10)), 6.5, 1e-15);
  EXPECT_THROW(mode_count(Eigen::VectorXd::Zero(7)), DomainError);
}

TEST(Generate, ShapesAndRanges) {
  for (Scenario s : all_scenarios()) {
    SimSpec spec;
    spec.scenario = s;
    spec.seed = 5;
    const SimulatedData sim = generate(spec);
    EXPECT_EQ(sim.data.size(), spec.size());
    EXPECT_EQ(sim.data.dim(), spec.dim());
    EXPECT_GE(sim.data.x.minCoeff(), 0.0);
    EXPECT_LE(sim.data.x.maxCoeff(), 1.0);
    EXPECT_EQ(static_cast<Eigen::Index>(sim.branches.size()), spec.size());
    EXPECT_EQ(parse_scenario(to_string(s)), s);
  }
  SimSpec a;
  a.scenario = Scenario::Unimodal2d;
  EXPECT_EQ(a.size(), 225);
  EXPECT_EQ(a.dim(), 2);
  EXPECT_EQ(a.noise_variance, 0.0625);
  a.scenario = Scenario::Multimodal225;
  EXPECT_EQ(a.size(), 225);
  EXPECT_EQ(a.dim(), 10);
  a.noise_variance = 0.0;
  EXPECT_THROW(a.validate(), DomainError);
}

TEST(Generate, BranchesWithinModeCount) {
  SimSpec spec;
  spec.scenario = Scenario::Multimodal225;
  spec.seed = 6;
  const SimulatedData sim = generate(spec);
  for (Eigen::Index i = 0; i < sim.data.size(); ++i) {
    const int b = sim.branches[static_cast<std::size_t>(i)];
    EXPECT_GE(b, 1);
    EXPECT_LE(b, mode_count(sim.data.x.row(i).transpose()));
  }
}

TEST(Generate, Reproducible) {
  SimSpec spec;
  spec.scenario = Scenario::Unimodal10d;
  spec.seed = 9;
  const SimulatedData a = generate(spec), b = generate(spec);
  EXPECT_EQ(a.data.y, b.data.y);
  EXPECT_EQ(a.data.x, b.data.x);
  spec.seed = 10;
  EXPECT_NE(generate(spec).data.y, a.data.y);
}

TEST(Generate, UniformBranchesWhereFourModes) {
  std::array<long, 5> counts{};
  long total = 0;
  for (std::uint64_t seed = 1; total < 100000; ++seed) {
    SimSpec spec;
    spec.scenario = Scenario::Multimodal225;
    spec.seed = seed;
    const SimulatedData sim = generate(spec);
    for (Eigen::Index i = 0; i < sim.data.size(); ++i) {
      if (mode_count(sim.data.x.row(i).transpose()) != 4) continue;
      ++counts[static_cast<std::size_t>(sim.branches[static_cast<std::size_t>(i)])];
      ++total;
    }
  }
  const double se = std::sqrt(0.25 * 0.75 / static_cast<double>(total));
  for (int b = 1; b <= 4; ++b) {
    EXPECT_NEAR(static_cast<double>(counts[static_cast<std::size_t>(b)]) / total, 0.25, 4.0 * se);
  }
  EXPECT_THROW(branch_mean(5, Eigen::VectorXd::Zero(10)), DomainError);
}

}  // namespace
}  // namespace lgp::sim
