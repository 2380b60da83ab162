// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <chrono>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "lgp/app/config.hpp"
#include "lgp/outputs.hpp"
#include "lgp/sampler.hpp"

namespace lgp::app {

nlohmann::json manifest_base(const std::string& command, const RunConfig& config);
void write_json(const std::filesystem::path& path, const nlohmann::json& value);
void write_timing(const std::filesystem::path& dir, std::chrono::steady_clock::time_point start);
void ensure_directory(const std::filesystem::path& dir);

// predictive.csv and, when densities were accumulated, density.csv.
void write_predictive(const std::filesystem::path& dir, const RunConfig& config,
                      const std::vector<PredictiveAccumulator>& predictive,
                      const std::vector<DensityAccumulator>& densities);

struct StoredDraws {
  bool gp = true;
  std::vector<PosteriorDraw> draws;
};

// posterior_draws.csv and components.csv written by fit.
StoredDraws read_draws(const std::filesystem::path& dir, Eigen::Index n, Eigen::Index k);

}  // namespace lgp::app
