// Apache License, Version 2.0, refer to LICENSE.txt

#include <fmt/format.h>

#include <cmath>
#include <iostream>
#include <map>

#include "lgp/app/commands.hpp"
#include "lgp/app/csv.hpp"
#include "lgp/distributions.hpp"
#include "lgp/errors.hpp"
#include "internal.hpp"

namespace lgp::app {

std::vector<WeightRow> weight_table(const std::vector<double>& x, const std::vector<double>& eta,
                                    double variance, double floor) {
  if (x.size() != eta.size()) throw DomainError("weights: x and eta lengths differ");
  if (!(variance > 0.0)) throw DomainError("weights: variance must be positive");
  std::vector<WeightRow> rows;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const int reach = default_truncation(eta[k], variance);
    for (int j = -reach; j <= reach; ++j) {
      const double w = mixture_weight(j, eta[k], variance);
      if (w > floor) rows.push_back({x[k], j, w});
    }
  }
  return rows;
}

namespace {

Eigen::VectorXd output_grid(const RunConfig& config) {
  if (config.grid_n > 0) {
    return Eigen::VectorXd::LinSpaced(config.grid_n, config.grid_lo, config.grid_hi);
  }
  return Eigen::VectorXd::LinSpaced(201, -5.0, 5.0);
}

std::vector<double> x_grid(const WeightsConfig& w) {
  if (w.x_n < 1) throw ConfigError("weights: x_n must be >= 1");
  std::vector<double> xs;
  for (int k = 0; k < w.x_n; ++k) {
    xs.push_back(w.x_n == 1 ? w.x_lo : w.x_lo + (w.x_hi - w.x_lo) * k / (w.x_n - 1));
  }
  return xs;
}

// Curves from explicit eta values and sigma_C^2, with mu_j = j + offset.
void explicit_curves(const RunConfig& config, CsvWriter& weights, CsvWriter& density) {
  const WeightsConfig& w = config.weights;
  std::vector<double> xs = w.x;
  std::vector<double> etas = w.eta;
  if (xs.empty()) {
    xs = x_grid(w);
    for (double x : xs) etas.push_back(w.eta_intercept + w.eta_slope * x);
  }
  if (!(w.component_variance > 0.0)) throw ConfigError("weights: component_variance must be > 0");
  const std::vector<WeightRow> rows = weight_table(xs, etas, w.sigma_c2);
  for (const auto& r : rows) {
    weights << r.x << r.label << r.weight;
    weights.end_row();
  }
  const Eigen::VectorXd grid = output_grid(config);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    ComponentTable table;
    const auto [lo, hi] = mixture_window(etas[k], w.sigma_c2);
    for (int j = lo; j <= hi; ++j) table.set(j, {j + w.component_mean_offset, w.component_variance});
    for (Eigen::Index g = 0; g < grid.size(); ++g) {
      density << xs[k] << grid[g] << mixture_density(grid[g], etas[k], w.sigma_c2, table);
      density.end_row();
    }
  }
}

// Posterior mean weights and densities along one covariate axis, the other
// covariates held at their sample means.
void fitted_curves(const RunConfig& config, CsvWriter& weights, CsvWriter& density) {
  const WeightsConfig& w = config.weights;
  const LoadedData loaded = load_dataset(config);
  const Dataset& data = loaded.data;
  const Eigen::Index p = data.dim();
  int axis = w.axis;
  if (axis == 0 && p == 1) axis = 1;
  if (axis < 1 || axis > p) {
    throw ConfigError(fmt::format(
        "weights: data has {} covariates; set weights.axis to one of 1..{}", p, p));
  }
  if (data.coords.cols() > 0) throw ConfigError("weights: spatio-temporal fits are not supported");
  RunConfig local = config;
  local.predict_points.clear();
  const std::vector<double> xs = x_grid(w);
  Eigen::VectorXd base = loaded.raw_x.colwise().mean().transpose();
  for (double x : xs) {
    Eigen::VectorXd row = base;
    row[axis - 1] = x;
    local.predict_points.push_back(row);
  }
  local.grid_n = 0;
  const SamplerConfig sampler = resolve_sampler(local, data);
  const StoredDraws stored = read_draws(w.fit_dir, data.size(), p + 1);
  const Eigen::MatrixXd design = intercept_design(data.x);
  const Eigen::MatrixXd sites = data.kernel_inputs();
  const Eigen::VectorXd grid = output_grid(config);

  std::vector<std::map<int, double>> weight_sums(xs.size());
  std::vector<Eigen::VectorXd> density_sums(xs.size(), Eigen::VectorXd::Zero(grid.size()));
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
    for (std::size_t q = 0; q < xs.size(); ++q) {
      PredictiveMoments m;
      if (stored.gp) {
        m = evaluate_query(queries[q], draw.beta, residual, draw.sigma_c2);
      } else {
        Eigen::VectorXd row(p + 1);
        row[0] = 1.0;
        row.tail(p) = sampler.query_points[q];
        m = {row.dot(draw.beta), std::exp(row.dot(draw.lambda))};
      }
      if (m.variance > 0.0) {
        const auto [lo, hi] = mixture_window(m.mean, m.variance);
        components.ensure_range(lo, hi, sampler.priors, rng);
        for (int j = lo; j <= hi; ++j) weight_sums[q][j] += mixture_weight(j, m.mean, m.variance);
      } else {
        const int j = label_of(m.mean);
        components.fetch(j, sampler.priors, rng);
        weight_sums[q][j] += 1.0;
      }
      density_sums[q] += conditional_density_curve({m.mean, m.variance, &components}, grid);
    }
  }
  const double count = static_cast<double>(stored.draws.size());
  for (std::size_t q = 0; q < xs.size(); ++q) {
    for (const auto& [j, s] : weight_sums[q]) {
      if (s / count > 1e-6) {
        weights << xs[q] << j << s / count;
        weights.end_row();
      }
    }
    for (Eigen::Index g = 0; g < grid.size(); ++g) {
      density << xs[q] << grid[g] << density_sums[q][g] / count;
      density.end_row();
    }
  }
}

}  // namespace

void run_weights(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ensure_directory(config.out);
  {
    CsvWriter weights(config.out / "weights.csv", {"x", "label", "weight"});
    CsvWriter density(config.out / "weight_density.csv", {"x", "y", "density"});
    if (config.weights.fit_dir.empty()) {
      explicit_curves(config, weights, density);
    } else {
      fitted_curves(config, weights, density);
    }
  }
  nlohmann::json m = manifest_base("weights", config);
  const WeightsConfig& w = config.weights;
  m["weights"] = {{"mode", w.fit_dir.empty() ? "explicit" : "fitted"},
                  {"sigma_c2", w.sigma_c2},
                  {"x", w.x},
                  {"eta", w.eta},
                  {"x_grid", {w.x_lo, w.x_hi, w.x_n}},
                  {"eta_line", {w.eta_intercept, w.eta_slope}},
                  {"component_mean_offset", w.component_mean_offset},
                  {"component_variance", w.component_variance},
                  {"axis", w.axis},
                  {"fit_dir", w.fit_dir}};
  m["files"] = {"weights.csv", "weight_density.csv", "manifest.json"};
  write_json(config.out / "manifest.json", m);
  write_timing(config.out, start);
  std::cout << "wrote " << (config.out / "weights.csv").string() << '\n';
}

}  // namespace lgp::app
