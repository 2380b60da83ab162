// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lgp/model.hpp"
#include "lgp/random.hpp"

namespace lgp::sim {

// 1.9 [1.35 + exp(x1) sin(13 (x1 - .6)^2) exp(-x2) sin(7 x2)]
double mean_e1(const Eigen::VectorXd& x);
// (-2 x1)^{1(x1 < .6)} (-1.2 x1)^{1(x1 >= .6)} + cos(5 pi x2) / (1 + 3 x2^2)
double mean_e2(const Eigen::VectorXd& x);
// t^2 exp(t) with t = (x1, .., x4) (2, 1, 1, 1)^T / sqrt(7)
double mean_e3(const Eigen::VectorXd& x);
// 10 sin(pi x1 x2) + 20 (x3 - .5)^2 + 10 x4 + 5 x5
double mean_e4(const Eigen::VectorXd& x);
// (3, 1.5, 0, 0, 2, 0, 0, 0) (x1, .., x8)^T
double mean_e5(const Eigen::VectorXd& x);
// min(max(floor(mean_e5(x)), 1), 4)
int mode_count(const Eigen::VectorXd& x);
// mean_e1 .. mean_e4 by branch index 1..4.
double branch_mean(int branch, const Eigen::VectorXd& x);

enum class Scenario { Unimodal2d, Unimodal10d, Multimodal100, Multimodal225 };

std::string to_string(Scenario s);
Scenario parse_scenario(const std::string& name);
std::vector<Scenario> all_scenarios();

struct SimSpec {
  Scenario scenario = Scenario::Unimodal2d;
  double noise_variance = 0.0625;
  std::uint64_t seed = 1;

  Eigen::Index size() const;
  Eigen::Index dim() const;
  void validate() const;
};

struct SimulatedData {
  Dataset data;               // raw covariates in [0, 1]^p, not standardized
  std::vector<int> branches;  // mixture branch per row (all 1 when unimodal)
};

// Covariates iid uniform on the unit cube; unimodal scenarios draw
// y ~ n(E(x), s2), multimodal ones draw a branch uniformly on
// {1, .., mode_count(x)} first.
SimulatedData generate(const SimSpec& spec);
SimulatedData generate(const SimSpec& spec, Rng& rng);

}  // namespace lgp::sim
