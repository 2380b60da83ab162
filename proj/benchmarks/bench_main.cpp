// Apache License, Version 2.0, refer to LICENSE.txt

#include <benchmark/benchmark.h>

#include "lgp/distributions.hpp"
#include "lgp/gp_engine.hpp"
#include "lgp/sampler.hpp"
#include "lgp/simgen.hpp"

namespace {

lgp::Dataset scenario_data(lgp::sim::Scenario s) {
  lgp::sim::SimSpec spec;
  spec.scenario = s;
  spec.seed = 1;
  lgp::Dataset d = lgp::sim::generate(spec).data;
  d.standardization = lgp::standardize_columns(d.x);
  return d;
}

lgp::SamplerConfig config_for(const lgp::Dataset& d, lgp::ModelKind kind) {
  lgp::SamplerConfig c;
  c.model = kind;
  c.priors = lgp::Priors::defaults(d.dim());
  c.priors.mu_mean = d.y.mean();
  c.priors.mu_var = 100.0;
  return c;
}

void BM_GpSweep(benchmark::State& state) {
  const auto s = static_cast<lgp::sim::Scenario>(state.range(0));
  const lgp::Dataset d = scenario_data(s);
  const lgp::SamplerConfig c = config_for(d, lgp::ModelKind::Gp);
  lgp::Rng rng(3);
  lgp::GpSampler sampler(d, c, rng);
  for (int k = 0; k < 200; ++k) sampler.sweep_core();
  for (auto _ : state) {
    sampler.sweep_core();
    sampler.sweep_extensions();
  }
  state.SetLabel(lgp::sim::to_string(s));
}
BENCHMARK(BM_GpSweep)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_IndependenceSweep(benchmark::State& state) {
  const auto s = static_cast<lgp::sim::Scenario>(state.range(0));
  const lgp::Dataset d = scenario_data(s);
  const lgp::SamplerConfig c = config_for(d, lgp::ModelKind::Independence);
  lgp::Rng rng(3);
  lgp::IndependenceSampler sampler(d, c, rng);
  for (auto _ : state) {
    sampler.sweep_core(false);
    sampler.sweep_extensions();
  }
  state.SetLabel(lgp::sim::to_string(s));
}
BENCHMARK(BM_IndependenceSweep)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_WorkspaceBuild(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  lgp::Rng rng(5);
  Eigen::MatrixXd sites(n, 2);
  for (Eigen::Index i = 0; i < sites.size(); ++i) sites.data()[i] = 4.0 * rng.uniform();
  const lgp::CorrelationSpec spec;
  for (auto _ : state) {
    auto c = lgp::correlation_matrix(spec, sites);
    benchmark::DoNotOptimize(lgp::GpWorkspace::build(c.values, 1.0));
  }
}
BENCHMARK(BM_WorkspaceBuild)->Arg(50)->Arg(100)->Arg(225)->Unit(benchmark::kMicrosecond);

void BM_TruncatedNormal(benchmark::State& state) {
  const double offset = static_cast<double>(state.range(0));
  lgp::Rng rng(7);
  const lgp::TruncatedNormalSpec spec{0.0, 1.0, offset, offset + 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(lgp::sample_truncated_normal(spec, rng));
  state.SetLabel(offset > 6.0 ? "tail rejection" : "inverse cdf");
}
BENCHMARK(BM_TruncatedNormal)->Arg(-1)->Arg(3)->Arg(12);

void BM_DrawLabel(benchmark::State& state) {
  lgp::Rng rng(9);
  lgp::ComponentTable table;
  const int reach = static_cast<int>(state.range(0));
  for (int j = -reach; j <= reach; ++j) table.set(j, {0.3 * j, 0.5});
  const double u = 0.5 * std::exp(-static_cast<double>(reach));
  for (auto _ : state) benchmark::DoNotOptimize(lgp::draw_label(0.4, u, 0.2, 2.0, table, rng));
}
BENCHMARK(BM_DrawLabel)->Arg(2)->Arg(10)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
