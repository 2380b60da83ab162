// Apache License, Version 2.0, refer to LICENSE.txt

#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <map>

#include "lgp/app/commands.hpp"
#include "lgp/app/csv.hpp"
#include "lgp/errors.hpp"
#include "internal.hpp"

namespace lgp::app {

StoredDraws read_draws(const std::filesystem::path& dir, Eigen::Index n, Eigen::Index k) {
  const CsvTable t = read_csv(dir / "posterior_draws.csv");
  const CsvTable c = read_csv(dir / "components.csv");
  StoredDraws out;
  out.gp = t.find("sigma_c2") >= 0;
  auto col = [&](const CsvTable& table, const std::string& name) {
    const int i = table.find(name);
    if (i < 0) throw DomainError("fit output: missing column '" + name + "'");
    return static_cast<std::size_t>(i);
  };
  if (t.find(fmt::format("z_{}", n)) < 0 || t.find(fmt::format("z_{}", n + 1)) >= 0) {
    throw DomainError("fit output was produced for a different number of observations");
  }
  if (t.find(fmt::format("beta_{}", k - 1)) < 0 || t.find(fmt::format("beta_{}", k)) >= 0) {
    throw DomainError("fit output was produced for a different number of covariates");
  }

  std::map<std::pair<long, long>, ComponentTable> tables;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    const auto& row = c.rows[r];
    const long chain = static_cast<long>(parse_cell(row[col(c, "chain")], r + 1, "chain"));
    const long sweep = static_cast<long>(parse_cell(row[col(c, "sweep")], r + 1, "sweep"));
    const int label = static_cast<int>(parse_cell(row[col(c, "label")], r + 1, "label"));
    tables[{chain, sweep}].set(label, {parse_cell(row[col(c, "mean")], r + 1, "mean"),
                                       parse_cell(row[col(c, "variance")], r + 1, "variance")});
  }

  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    auto get = [&](const std::string& name) { return parse_cell(row[col(t, name)], r + 1, name); };
    PosteriorDraw d;
    const long chain = static_cast<long>(get("chain"));
    d.sweep = static_cast<long>(get("sweep"));
    if (out.gp) {
      d.sigma_c2 = get("sigma_c2");
      d.phi1 = get("phi1");
      d.phi2 = get("phi2");
    }
    d.beta.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) d.beta[j] = get(fmt::format("beta_{}", j));
    if (!out.gp) {
      d.lambda.resize(k);
      for (Eigen::Index j = 0; j < k; ++j) d.lambda[j] = get(fmt::format("lambda_{}", j));
    }
    d.z.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) d.z[i] = get(fmt::format("z_{}", i + 1));
    auto it = tables.find({chain, d.sweep});
    if (it != tables.end()) d.components = it->second;
    out.draws.push_back(std::move(d));
  }
  if (out.draws.empty()) throw DomainError("fit output holds no posterior draws");
  return out;
}

void run_predict(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.fit_dir.empty()) throw ConfigError("predict: set predict.fit_dir");
  if (config.predict_points.empty()) throw ConfigError("predict: set predict.points");
  const LoadedData loaded = load_dataset(config);
  const Dataset& data = loaded.data;
  const SamplerConfig sampler = resolve_sampler(config, data);
  const StoredDraws stored = read_draws(config.fit_dir, data.size(), data.dim() + 1);

  const Eigen::MatrixXd design = intercept_design(data.x);
  const Eigen::MatrixXd sites = data.kernel_inputs();
  const std::size_t nq = sampler.query_points.size();
  std::vector<PredictiveAccumulator> predictive(nq);
  std::vector<DensityAccumulator> densities;
  if (sampler.y_grid.size() > 0) densities.assign(nq, DensityAccumulator(sampler.y_grid));

  Rng rng(config.seed);
  GpWorkspace workspace;
  std::vector<PredictiveQuery> queries;
  double built_phi1 = std::nan(""), built_phi2 = std::nan("");
  for (const PosteriorDraw& draw : stored.draws) {
    ComponentTable components = draw.components;
    if (stored.gp && !(draw.phi1 == built_phi1 && draw.phi2 == built_phi2)) {
      CorrelationSpec spec = sampler.kernel;
      spec.phi1 = draw.phi1;
      spec.phi2 = draw.phi2;
      workspace = GpWorkspace::build(correlation_matrix(spec, sites).values, draw.sigma_c2);
      queries.clear();
      for (const auto& x : sampler.query_points) {
        queries.push_back(prepare_query(x, sites, spec, workspace, design.cols()));
      }
      built_phi1 = draw.phi1;
      built_phi2 = draw.phi2;
    }
    const Eigen::VectorXd residual = stored.gp ? Eigen::VectorXd(draw.z - design * draw.beta)
                                               : Eigen::VectorXd();
    for (std::size_t q = 0; q < nq; ++q) {
      PredictiveMoments m;
      if (stored.gp) {
        m = evaluate_query(queries[q], draw.beta, residual, draw.sigma_c2);
      } else {
        Eigen::VectorXd row(design.cols());
        row[0] = 1.0;
        row.tail(design.cols() - 1) = sampler.query_points[q].head(design.cols() - 1);
        m = {row.dot(draw.beta), std::exp(row.dot(draw.lambda))};
      }
      const double z = m.variance > 0.0 ? m.mean + std::sqrt(m.variance) * rng.normal() : m.mean;
      const Component& c = components.fetch(label_of(z), sampler.priors, rng);
      predictive[q].add(c.mean + std::sqrt(c.variance) * rng.normal());
      if (!densities.empty()) {
        if (m.variance > 0.0) {
          const auto [lo, hi] = mixture_window(m.mean, m.variance);
          components.ensure_range(lo, hi, sampler.priors, rng);
        } else {
          components.fetch(label_of(m.mean), sampler.priors, rng);
        }
        densities[q].add(conditional_density_curve({m.mean, m.variance, &components},
                                                   sampler.y_grid));
      }
    }
  }

  ensure_directory(config.out);
  write_predictive(config.out, config, predictive, densities);
  nlohmann::json m = manifest_base("predict", config);
  m["fit_dir"] = config.fit_dir;
  {
    std::ifstream in(std::filesystem::path(config.fit_dir) / "manifest.json");
    if (in) {
      const auto fit = nlohmann::json::parse(in, nullptr, false);
      if (!fit.is_discarded() && fit.contains("config_hash")) m["fit_config_hash"] = fit["config_hash"];
    }
  }
  m["draws"] = stored.draws.size();
  std::vector<std::string> files = {"predictive.csv"};
  if (!densities.empty()) files.push_back("density.csv");
  files.push_back("manifest.json");
  m["files"] = files;
  write_json(config.out / "manifest.json", m);
  write_timing(config.out, start);
  for (std::size_t q = 0; q < nq; ++q) {
    const PredictiveEstimate e = predictive_moments_estimate(predictive[q]);
    std::cout << fmt::format("point {}: E = {:.4f}  Var = {:.4f}\n", q + 1, e.mean, e.variance);
  }
}

}  // namespace lgp::app
