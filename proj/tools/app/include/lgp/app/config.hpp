// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgp/kernels.hpp"
#include "lgp/sampler.hpp"
#include "lgp/simgen.hpp"

namespace lgp::app {

// Malformed or inconsistent configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable input or unwritable output.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Preset { Paper, Desk };
Preset parse_preset(const std::string& name);

struct DataConfig {
  std::string input;                  // CSV path; empty when simulating
  std::string response = "y";
  std::vector<std::string> covariates;  // empty: every other numeric column
  std::vector<std::string> coordinates;
  int space_dims = 0;
  bool standardize = true;
  std::optional<sim::SimSpec> scenario;
};

struct PriorConfig {
  std::optional<double> mu_mean;  // unset: 0, or the mean of y with empirical
  bool mu_mean_empirical = false;
  double mu_var = 10.0;
  double sigma_shape = 1.0;
  double sigma_rate = 1e-3;
  double beta_var = 1e5;
  double c_shape = 1.0;
  double c_rate = 1e4;
  double log_phi1_mean = std::log(0.5);
  double log_phi1_sd = 1.0;
  double lambda_var = 1e5;
};

struct WeightsConfig {
  std::vector<double> x;    // explicit points
  std::vector<double> eta;  // eta at those points
  double x_lo = 0.0;
  double x_hi = 5.0;
  int x_n = 101;
  double eta_intercept = 0.0;
  double eta_slope = 1.0;
  double sigma_c2 = 1.0;
  double component_mean_offset = -0.5;  // mu_j = j + offset
  double component_variance = 0.25;
  int axis = 0;  // 1-based covariate index for fitted curves, 0 = unset
  std::string fit_dir;
};

struct RunConfig {
  std::filesystem::path source;  // config file, for messages
  std::string name;              // label used by compare
  DataConfig data;
  PriorConfig priors;
  SamplerConfig sampler;
  int chains = 1;
  std::uint64_t seed = 1;
  std::filesystem::path out = "lgp-out";
  std::vector<Eigen::VectorXd> predict_points;  // raw covariate scale
  double grid_lo = -5.0;
  double grid_hi = 5.0;
  int grid_n = 0;  // 0 disables density grids
  std::string fit_dir;  // predict: directory written by fit
  WeightsConfig weights;
};

// INI file with [data], [model], [priors], [sampler], [predict] and
// [weights] sections. Unknown keys are errors.
RunConfig load_config(const std::filesystem::path& path);
RunConfig default_config();

void apply_preset(RunConfig& config, Preset preset);

// Sampler settings for a dataset: priors resolved against p and y.
SamplerConfig resolve_sampler(const RunConfig& config, const Dataset& data);

// key = value lines of every resolved setting, sorted; the basis of the
// config hash recorded in manifests.
std::string canonical_text(const RunConfig& config);
std::uint64_t fnv1a(const std::string& text);

}  // namespace lgp::app
