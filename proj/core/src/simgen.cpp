// Apache License, Version 2.0, refer to LICENSE.txt

#include "lgp/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lgp/errors.hpp"

namespace lgp::sim {

namespace {

void need(const Eigen::VectorXd& x, Eigen::Index k, const char* what) {
  if (x.size() < k) {
    throw DomainError(std::string(what) + ": needs " + std::to_string(k) +
                      " covariates");
  }
}

}  // namespace

double mean_e1(const Eigen::VectorXd& x) {
  need(x, 2, "mean_e1");
  const double x1 = x[0], x2 = x[1];
  return 1.9 * (1.35 + std::exp(x1) * std::sin(13.0 * (x1 - 0.6) * (x1 - 0.6)) *
                           std::exp(-x2) * std::sin(7.0 * x2));
}

double mean_e2(const Eigen::VectorXd& x) {
  need(x, 2, "mean_e2");
  const double x1 = x[0], x2 = x[1];
  const double lead = x1 < 0.6 ? -2.0 * x1 : -1.2 * x1;
  return lead + std::cos(5.0 * std::numbers::pi * x2) / (1.0 + 3.0 * x2 * x2);
}

double mean_e3(const Eigen::VectorXd& x) {
  need(x, 4, "mean_e3");
  const double t = (2.0 * x[0] + x[1] + x[2] + x[3]) / std::sqrt(7.0);
  return t * t * std::exp(t);
}

double mean_e4(const Eigen::VectorXd& x) {
  need(x, 5, "mean_e4");
  return 10.0 * std::sin(std::numbers::pi * x[0] * x[1]) +
         20.0 * (x[2] - 0.5) * (x[2] - 0.5) + 10.0 * x[3] + 5.0 * x[4];
}

double mean_e5(const Eigen::VectorXd& x) {
  need(x, 8, "mean_e5");
  return 3.0 * x[0] + 1.5 * x[1] + 2.0 * x[4];
}

int mode_count(const Eigen::VectorXd& x) {
  const double f = std::floor(mean_e5(x));
  return static_cast<int>(std::clamp(f, 1.0, 4.0));
}

double branch_mean(int branch, const Eigen::VectorXd& x) {
  switch (branch) {
    case 1: return mean_e1(x);
    case 2: return mean_e2(x);
    case 3: return mean_e3(x);
    case 4: return mean_e4(x);
    default: throw DomainError("branch must be in 1..4");
  }
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Unimodal2d: return "unimodal-2d";
    case Scenario::Unimodal10d: return "unimodal-10d";
    case Scenario::Multimodal100: return "multimodal-100";
    case Scenario::Multimodal225: return "multimodal-225";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& name) {
  for (Scenario s : all_scenarios()) {
    if (to_string(s) == name) return s;
  }
  throw DomainError("unknown scenario '" + name + "'");
}

std::vector<Scenario> all_scenarios() {
  return {Scenario::Unimodal2d, Scenario::Unimodal10d, Scenario::Multimodal100,
          Scenario::Multimodal225};
}

Eigen::Index SimSpec::size() const {
  switch (scenario) {
    case Scenario::Unimodal2d: return 225;
    case Scenario::Unimodal10d: return 100;
    case Scenario::Multimodal100: return 100;
    case Scenario::Multimodal225: return 225;
  }
  return 0;
}

Eigen::Index SimSpec::dim() const {
  return scenario == Scenario::Unimodal2d ? 2 : 10;
}

void SimSpec::validate() const {
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
    throw DomainError("simulation noise variance must be positive");
  }
}

SimulatedData generate(const SimSpec& spec) {
  Rng rng(spec.seed);
  return generate(spec, rng);
}

SimulatedData generate(const SimSpec& spec, Rng& rng) {
  spec.validate();
  const Eigen::Index n = spec.size();
  const Eigen::Index p = spec.dim();
  const bool multimodal = spec.scenario == Scenario::Multimodal100 ||
                          spec.scenario == Scenario::Multimodal225;
  const double sd = std::sqrt(spec.noise_variance);

  SimulatedData out;
  out.data.x.resize(n, p);
  out.data.y.resize(n);
  out.branches.assign(static_cast<std::size_t>(n), 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd x(p);
    for (Eigen::Index k = 0; k < p; ++k) x[k] = rng.uniform();
    out.data.x.row(i) = x.transpose();
    double mean = 0.0;
    if (multimodal) {
      const int modes = mode_count(x);
      const int branch = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(modes)));
      out.branches[static_cast<std::size_t>(i)] = branch;
      mean = branch_mean(branch, x);
    } else if (spec.scenario == Scenario::Unimodal2d) {
      mean = mean_e1(x);
    } else {
      mean = mean_e4(x);
    }
    out.data.y[i] = mean + sd * rng.normal();
  }
  for (Eigen::Index k = 0; k < p; ++k) {
    out.data.covariate_names.push_back("x" + std::to_string(k + 1));
  }
  return out;
}

}  // namespace lgp::sim
