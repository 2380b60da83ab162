// Apache License, Version 2.0, refer to LICENSE.txt

#include <CLI11.hpp>
#include <iostream>

#include "lgp/app/commands.hpp"
#include "lgp/errors.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kData = 3,
  kNumerical = 4,
  kIo = 5,
};

struct Options {
  std::vector<std::string> configs;
  std::optional<long long> seed;
  std::optional<std::string> out;
  std::optional<int> chains;
  std::optional<std::string> preset;
  std::optional<std::string> scenario;
};

lgp::app::RunConfig prepare(const std::string& path, const Options& o) {
  using namespace lgp::app;
  RunConfig c = path.empty() ? default_config() : load_config(path);
  if (o.preset) apply_preset(c, parse_preset(*o.preset));
  if (o.seed) {
    if (*o.seed < 0) throw ConfigError("--seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(*o.seed);
  }
  if (o.chains) {
    if (*o.chains < 1) throw ConfigError("--chains must be >= 1");
    c.chains = *o.chains;
  }
  if (o.out) c.out = *o.out;
  if (o.scenario) {
    lgp::sim::SimSpec spec = c.data.scenario.value_or(lgp::sim::SimSpec{});
    try {
      spec.scenario = lgp::sim::parse_scenario(*o.scenario);
    } catch (const lgp::DomainError& e) {
      throw ConfigError(e.what());
    }
    c.data.scenario = spec;
    c.data.input.clear();
  }
  return c;
}

void add_common(CLI::App* cmd, Options& o, bool many_configs) {
  if (many_configs) {
    cmd->add_option("--config", o.configs, "INI config, one per model")->required();
  } else {
    cmd->add_option("--config", o.configs, "INI config file")->expected(0, 1);
  }
  cmd->add_option("--seed", o.seed, "Random seed (overrides the config)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--chains", o.chains, "Number of chains");
  cmd->add_option("--preset", o.preset, "Sweep preset: paper (150000/75000) or desk (20000/10000)")
      ->check(CLI::IsMember({"paper", "desk"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dependent Gaussian-process latent-partition regression"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LGP_VERSION);
  Options o;
  auto* fit = app.add_subcommand("fit", "Run the sampler and write traces, draws and D(m)");
  auto* simulate = app.add_subcommand("simulate", "Generate one of the benchmark data sets");
  auto* predict = app.add_subcommand("predict", "Predictive moments and densities from a fit");
  auto* compare = app.add_subcommand("compare", "Fit several models on one data set");
  auto* weights = app.add_subcommand("weights", "Tabulate mixture weights along a covariate");
  add_common(fit, o, false);
  add_common(simulate, o, false);
  simulate->add_option("--scenario", o.scenario,
                       "unimodal-2d, unimodal-10d, multimodal-100 or multimodal-225");
  add_common(predict, o, false);
  add_common(compare, o, true);
  add_common(weights, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  using namespace lgp::app;
  try {
    const std::string first = o.configs.empty() ? std::string() : o.configs.front();
    if (fit->parsed()) {
      if (first.empty()) throw ConfigError("fit: --config is required");
      run_fit(prepare(first, o));
    } else if (simulate->parsed()) {
      run_simulate(prepare(first, o));
    } else if (predict->parsed()) {
      if (first.empty()) throw ConfigError("predict: --config is required");
      run_predict(prepare(first, o));
    } else if (compare->parsed()) {
      std::vector<RunConfig> configs;
      for (const auto& path : o.configs) configs.push_back(prepare(path, o));
      run_compare(configs, o.out ? std::filesystem::path(*o.out) : configs.front().out);
    } else if (weights->parsed()) {
      run_weights(prepare(first, o));
    }
  } catch (const ConfigError& e) {
    std::cerr << "error[config]: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error[io]: " << e.what() << '\n';
    return kIo;
  } catch (const lgp::SamplerError& e) {
    std::cerr << "error[sampler]: " << e.what() << '\n';
    return kNumerical;
  } catch (const lgp::NumericalError& e) {
    std::cerr << "error[numerical]: " << e.what() << '\n';
    return kNumerical;
  } catch (const lgp::DomainError& e) {
    std::cerr << "error[data]: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
