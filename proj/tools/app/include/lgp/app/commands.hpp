// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lgp/app/config.hpp"
#include "lgp/outputs.hpp"
#include "lgp/sampler.hpp"

namespace lgp::app {

struct LoadedData {
  Dataset data;
  Eigen::MatrixXd raw_x;       // covariates before standardization
  std::vector<int> branches;   // simulated scenarios only
  std::string source;          // csv path or scenario name
};

LoadedData load_dataset(const RunConfig& config);

struct FitResult {
  std::vector<ChainOutput> chains;
  CriterionAccumulator criterion;  // all chains, sweeps concatenated
  std::vector<PredictiveAccumulator> predictive;
  std::vector<DensityAccumulator> densities;
  SupportReport support;
};

// Chain k uses Rng(seed, k). Chains run on their own threads.
FitResult fit_chains(const Dataset& data, const SamplerConfig& sampler, int chains,
                     std::uint64_t seed);

// Each command writes its artifacts under config.out plus manifest.json
// (everything needed to rerun it) and timing.json (wall time only, so the
// rest stays byte-identical across runs).
void run_fit(const RunConfig& config);
void run_simulate(const RunConfig& config);
void run_predict(const RunConfig& config);
void run_weights(const RunConfig& config);
// Fits every config on the same data and writes comparison.csv under `out`.
void run_compare(const std::vector<RunConfig>& configs, const std::filesystem::path& out);

struct WeightRow {
  double x = 0.0;
  int label = 0;
  double weight = 0.0;
};

// omega_j(x) = P(n(eta(x), variance) in (j - 1, j]) for every j whose
// weight exceeds `floor`.
std::vector<WeightRow> weight_table(const std::vector<double>& x, const std::vector<double>& eta,
                                    double variance, double floor = 1e-6);

// One line per model, Table 1 style: name, D, MCCI half-width and the
// five-number summary of D_i.
std::string format_criterion_row(const std::string& name, const CriterionReport& report);

}  // namespace lgp::app
