// Apache License, Version 2.0, refer to LICENSE.txt

#include <fmt/format.h>

#include <cmath>
#include <exception>
#include <iostream>
#include <thread>

#include "lgp/app/commands.hpp"
#include "lgp/app/csv.hpp"
#include "lgp/errors.hpp"
#include "internal.hpp"

namespace lgp::app {

LoadedData load_dataset(const RunConfig& config) {
  LoadedData out;
  if (config.data.scenario) {
    sim::SimulatedData s = sim::generate(*config.data.scenario);
    out.data = std::move(s.data);
    out.branches = std::move(s.branches);
    out.source = "scenario:" + sim::to_string(config.data.scenario->scenario);
    out.raw_x = out.data.x;
    if (config.data.standardize) out.data.standardization = standardize_columns(out.data.x);
    out.data.validate();
    return out;
  }
  if (config.data.input.empty()) {
    throw ConfigError("config: set data.input or data.scenario");
  }
  DataConfig raw_cfg = config.data;
  raw_cfg.standardize = false;
  out.data = ingest_csv(config.data.input, raw_cfg);
  out.raw_x = out.data.x;
  if (config.data.standardize) out.data.standardization = standardize_columns(out.data.x);
  out.source = config.data.input;
  return out;
}

FitResult fit_chains(const Dataset& data, const SamplerConfig& sampler, int chains,
                     std::uint64_t seed) {
  std::vector<ChainOutput> outputs(static_cast<std::size_t>(chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chains));
  auto work = [&](int k) {
    try {
      Rng rng(seed, static_cast<std::uint64_t>(k));
      outputs[static_cast<std::size_t>(k)] = run_chain(data, sampler, rng);
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  };
  if (chains == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int k = 0; k < chains; ++k) threads.emplace_back(work, k);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  FitResult r;
  r.predictive.assign(sampler.query_points.size(), PredictiveAccumulator{});
  if (sampler.y_grid.size() > 0) {
    r.densities.assign(sampler.query_points.size(), DensityAccumulator(sampler.y_grid));
  }
  for (const auto& c : outputs) {
    r.criterion.merge(c.criterion);
    for (std::size_t q = 0; q < r.predictive.size(); ++q) r.predictive[q].merge(c.predictive[q]);
    for (std::size_t q = 0; q < r.densities.size(); ++q) r.densities[q].merge(c.densities[q]);
    r.support.merge(c.support);
  }
  r.chains = std::move(outputs);
  return r;
}

std::string format_criterion_row(const std::string& name, const CriterionReport& r) {
  const std::string mcci =
      std::isnan(r.mcci_half_width) ? std::string("n/a") : fmt::format("{:.2f}", r.mcci_half_width);
  return fmt::format("{:<24} D = {:10.2f}  +/- {:>8}  D_i {{{:.2f}, {:.2f}, {:.2f}, {:.2f}, {:.2f}}}",
                     name, r.total, mcci, r.summary.min, r.summary.q25, r.summary.median,
                     r.summary.q75, r.summary.max);
}

namespace {

nlohmann::json criterion_json(const CriterionReport& r) {
  nlohmann::json j;
  j["D"] = r.total;
  j["mcci_half_width"] = std::isnan(r.mcci_half_width) ? nlohmann::json(nullptr)
                                                       : nlohmann::json(r.mcci_half_width);
  j["sweeps"] = r.sweeps;
  j["D_i_summary"] = {{"min", r.summary.min},
                      {"q25", r.summary.q25},
                      {"median", r.summary.median},
                      {"q75", r.summary.q75},
                      {"max", r.summary.max}};
  return j;
}

void write_trace(const std::filesystem::path& path, const ChainOutput& c, Eigen::Index k) {
  std::vector<std::string> header = {"sweep", "nmax", "occupied", "criterion"};
  const bool gp = c.model == ModelKind::Gp;
  if (gp) header.insert(header.end(), {"sigma_c2", "phi1", "phi2"});
  for (Eigen::Index j = 0; j < k; ++j) header.push_back(fmt::format("beta_{}", j));
  if (!gp) {
    for (Eigen::Index j = 0; j < k; ++j) header.push_back(fmt::format("lambda_{}", j));
  }
  CsvWriter w(path, header);
  for (const auto& t : c.trace) {
    w << t.sweep << t.nmax << t.occupied << t.criterion;
    if (gp) w << t.sigma_c2 << t.phi1 << t.phi2;
    for (Eigen::Index j = 0; j < k; ++j) w << t.beta[j];
    if (!gp) {
      for (Eigen::Index j = 0; j < k; ++j) w << t.lambda[j];
    }
    w.end_row();
  }
}

void write_draws(const std::filesystem::path& dir, const FitResult& r, Eigen::Index k,
                 Eigen::Index n) {
  const bool gp = r.chains.front().model == ModelKind::Gp;
  std::vector<std::string> header = {"chain", "sweep"};
  if (gp) header.insert(header.end(), {"sigma_c2", "phi1", "phi2"});
  for (Eigen::Index j = 0; j < k; ++j) header.push_back(fmt::format("beta_{}", j));
  if (!gp) {
    for (Eigen::Index j = 0; j < k; ++j) header.push_back(fmt::format("lambda_{}", j));
  }
  for (Eigen::Index i = 0; i < n; ++i) header.push_back(fmt::format("z_{}", i + 1));
  CsvWriter w(dir / "posterior_draws.csv", header);
  CsvWriter comps(dir / "components.csv", {"chain", "sweep", "label", "mean", "variance"});
  for (std::size_t c = 0; c < r.chains.size(); ++c) {
    for (const auto& d : r.chains[c].draws) {
      w << c << d.sweep;
      if (gp) w << d.sigma_c2 << d.phi1 << d.phi2;
      for (Eigen::Index j = 0; j < k; ++j) w << d.beta[j];
      if (!gp) {
        for (Eigen::Index j = 0; j < k; ++j) w << d.lambda[j];
      }
      for (Eigen::Index i = 0; i < n; ++i) w << d.z[i];
      w.end_row();
      for (const auto& [label, comp] : d.components.entries()) {
        comps << c << d.sweep << label << comp.mean << comp.variance;
        comps.end_row();
      }
    }
  }
}

}  // namespace

void write_predictive(const std::filesystem::path& dir, const RunConfig& config,
                      const std::vector<PredictiveAccumulator>& predictive,
                      const std::vector<DensityAccumulator>& densities) {
  if (config.predict_points.empty()) return;
  const Eigen::Index width = config.predict_points.front().size();
  std::vector<std::string> header = {"point"};
  for (Eigen::Index k = 0; k < width; ++k) header.push_back(fmt::format("x{}", k + 1));
  header.insert(header.end(), {"draws", "mean", "variance"});
  CsvWriter w(dir / "predictive.csv", header);
  for (std::size_t q = 0; q < predictive.size(); ++q) {
    w << q + 1;
    for (Eigen::Index k = 0; k < width; ++k) w << config.predict_points[q][k];
    w << predictive[q].count();
    if (predictive[q].count() >= 2) {
      const PredictiveEstimate e = predictive_moments_estimate(predictive[q]);
      w << e.mean << e.variance;
    } else {
      w << std::nan("") << std::nan("");
    }
    w.end_row();
  }
  if (densities.empty()) return;
  CsvWriter d(dir / "density.csv", {"point", "y", "density"});
  for (std::size_t q = 0; q < densities.size(); ++q) {
    if (densities[q].count() == 0) continue;
    const Eigen::VectorXd f = densities[q].estimate();
    for (Eigen::Index g = 0; g < f.size(); ++g) {
      d << q + 1 << densities[q].grid()[g] << f[g];
      d.end_row();
    }
  }
}

namespace {

// Fits one config into `dir`; returns the pooled criterion report.
CriterionReport fit_into(const RunConfig& config, const LoadedData& loaded,
                         const std::filesystem::path& dir) {
  const auto start = std::chrono::steady_clock::now();
  ensure_directory(dir);
  const SamplerConfig sampler = resolve_sampler(config, loaded.data);
  const FitResult r = fit_chains(loaded.data, sampler, config.chains, config.seed);
  if (r.criterion.sweeps() == 0) {
    throw DomainError("no retained sweeps (burn-in equals total sweeps)");
  }
  const CriterionReport report = r.criterion.report();
  const Eigen::Index k = loaded.data.dim() + 1;
  const Eigen::Index n = loaded.data.size();

  std::vector<std::string> files;
  for (std::size_t c = 0; c < r.chains.size(); ++c) {
    const std::string name = fmt::format("trace_chain{}.csv", c);
    write_trace(dir / name, r.chains[c], k);
    files.push_back(name);
  }
  if (sampler.store_draws) {
    write_draws(dir, r, k, n);
    files.insert(files.end(), {"posterior_draws.csv", "components.csv"});
  }
  {
    const Eigen::VectorXd& ref = loaded.data.y;
    CsvWriter w(dir / "criterion.csv", {"observation", "y", "D_i"});
    for (Eigen::Index i = 0; i < n; ++i) {
      w << i + 1 << ref[i] << report.per_observation[static_cast<std::size_t>(i)];
      w.end_row();
    }
    files.push_back("criterion.csv");
  }
  {
    CsvWriter w(dir / "criterion_series.csv", {"index", "D_s"});
    const auto& series = r.criterion.series();
    for (std::size_t s = 0; s < series.size(); ++s) {
      w << s + 1 << series[s];
      w.end_row();
    }
    files.push_back("criterion_series.csv");
  }
  write_predictive(dir, config, r.predictive, r.densities);
  if (!config.predict_points.empty()) files.push_back("predictive.csv");
  if (!r.densities.empty()) files.push_back("density.csv");

  nlohmann::json m = manifest_base("fit", config);
  m["dataset"] = {{"source", loaded.source}, {"n", n}, {"p", loaded.data.dim()}};
  m["criterion"] = criterion_json(report);
  m["support_violations"] = r.support.violations();
  nlohmann::json acc = nlohmann::json::array();
  for (const auto& c : r.chains) acc.push_back(c.acceptance);
  m["acceptance"] = acc;
  files.push_back("manifest.json");
  m["files"] = files;
  write_json(dir / "manifest.json", m);
  write_timing(dir, start);
  return report;
}

bool same_data(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) return false;
  auto eq = [](const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) return false;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double p = u.data()[i], q = v.data()[i];
      if (!(p == q || (std::isnan(p) && std::isnan(q)))) return false;
    }
    return true;
  };
  return eq(a.y, b.y) && eq(a.x, b.x) && eq(a.coords, b.coords);
}

}  // namespace

void run_fit(const RunConfig& config) {
  const LoadedData loaded = load_dataset(config);
  const CriterionReport report = fit_into(config, loaded, config.out);
  std::cout << format_criterion_row(config.name, report) << '\n';
}

void run_compare(const std::vector<RunConfig>& configs, const std::filesystem::path& out) {
  if (configs.size() < 2) throw ConfigError("compare: need at least two --config files");
  std::vector<LoadedData> data;
  for (const auto& c : configs) {
    data.push_back(load_dataset(c));
    if (!same_data(data.front().data, data.back().data)) {
      throw DomainError("compare: '" + c.source.string() + "' uses a different data set than '" +
                        configs.front().source.string() + "'");
    }
  }
  const auto start = std::chrono::steady_clock::now();
  ensure_directory(out);
  CsvWriter w(out / "comparison.csv", {"model", "type", "D", "mcci_half_width", "D_i_min",
                                       "D_i_q25", "D_i_median", "D_i_q75", "D_i_max"});
  nlohmann::json models = nlohmann::json::array();
  for (std::size_t m = 0; m < configs.size(); ++m) {
    const std::string name = fmt::format("{}_{}", m + 1, configs[m].name);
    const CriterionReport r = fit_into(configs[m], data[m], out / name);
    w << configs[m].name << to_string(configs[m].sampler.model) << r.total << r.mcci_half_width
      << r.summary.min << r.summary.q25 << r.summary.median << r.summary.q75 << r.summary.max;
    w.end_row();
    std::cout << format_criterion_row(configs[m].name, r) << '\n';
    models.push_back({{"name", configs[m].name},
                      {"directory", name},
                      {"config_hash", fmt::format("{:016x}", fnv1a(canonical_text(configs[m])))}});
  }
  nlohmann::json manifest = manifest_base("compare", configs.front());
  manifest["models"] = models;
  manifest["files"] = {"comparison.csv", "manifest.json"};
  write_json(out / "manifest.json", manifest);
  write_timing(out, start);
}

}  // namespace lgp::app
