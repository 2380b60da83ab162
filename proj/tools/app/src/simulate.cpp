// Apache License, Version 2.0, refer to LICENSE.txt

#include <iostream>

#include "lgp/app/commands.hpp"
#include "lgp/app/csv.hpp"
#include "internal.hpp"

namespace lgp::app {

void run_simulate(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (!config.data.scenario) throw ConfigError("simulate: set data.scenario");
  const sim::SimSpec& spec = *config.data.scenario;
  const sim::SimulatedData s = sim::generate(spec);
  ensure_directory(config.out);
  write_dataset_csv(config.out / "data.csv", s.data, s.data.x, {{"branch", s.branches}});

  nlohmann::json m = manifest_base("simulate", config);
  m["scenario"] = sim::to_string(spec.scenario);
  m["sim_seed"] = spec.seed;
  m["noise_variance"] = spec.noise_variance;
  m["n"] = s.data.size();
  m["p"] = s.data.dim();
  m["files"] = {"data.csv", "manifest.json"};
  write_json(config.out / "manifest.json", m);
  write_timing(config.out, start);
  std::cout << "wrote " << (config.out / "data.csv").string() << " (" << s.data.size()
            << " rows)\n";
}

}  // namespace lgp::app
