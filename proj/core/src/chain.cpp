// Apache License, Version 2.0, refer to LICENSE.txt

#include <set>

#include "lgp/errors.hpp"
#include "lgp/sampler.hpp"

namespace lgp {

namespace {

int occupied_labels(const Eigen::VectorXi& d) {
  std::set<int> seen(d.data(), d.data() + d.size());
  return static_cast<int>(seen.size());
}

void fill_gp(const GpSampler& s, TraceRow& row) {
  row.sigma_c2 = s.state().sigma_c2;
  row.phi1 = s.state().phi1;
  row.phi2 = s.state().phi2;
}

void fill_gp(const IndependenceSampler& s, TraceRow& row) {
  row.lambda = s.state().lambda;
}

void fill_draw(const GpSampler& s, PosteriorDraw& draw) {
  draw.sigma_c2 = s.state().sigma_c2;
  draw.phi1 = s.state().phi1;
  draw.phi2 = s.state().phi2;
}

void fill_draw(const IndependenceSampler& s, PosteriorDraw& draw) {
  draw.lambda = s.state().lambda;
}

void core_step(GpSampler& s, bool) { s.sweep_core(); }
void core_step(IndependenceSampler& s, bool adapting) { s.sweep_core(adapting); }

double acceptance(const GpSampler& s) { return s.phi_acceptance(); }
double acceptance(const IndependenceSampler& s) { return s.lambda_acceptance(); }

template <class Sampler>
ChainOutput drive(const Dataset& data, const SamplerConfig& config, Rng& rng,
                  ModelKind kind) {
  Sampler sampler(data, config, rng);
  const Eigen::Index n = data.size();
  const std::size_t nq = config.query_points.size();
  const bool densities = config.y_grid.size() > 0;

  ChainOutput out;
  out.model = kind;
  out.criterion = CriterionAccumulator(n);
  out.predictive.assign(nq, PredictiveAccumulator{});
  if (densities) out.densities.assign(nq, DensityAccumulator(config.y_grid));

  Eigen::VectorXd predicted(n);
  for (long s = 1; s <= config.sweeps; ++s) {
    try {
      core_step(sampler, s <= config.burnin);
      if (s > config.burnin) {
        ++out.retained;
        auto& st = sampler.state();
        for (Eigen::Index i = 0; i < n; ++i) {
          const double y = sampler.draw_predictive_site(i).y;
          predicted[i] =
              data.is_ordinal()
                  ? ordinal_category(y, data.ordinal_max[static_cast<std::size_t>(i)])
                  : y;
        }
        out.criterion.add(criterion_reference(st, data), predicted);
        for (std::size_t q = 0; q < nq; ++q) {
          out.predictive[q].add(sampler.draw_predictive(q).y);
        }
        if ((s - config.burnin) % config.thin == 0) {
          TraceRow row;
          row.sweep = s;
          row.nmax = st.nmax;
          row.occupied = occupied_labels(st.d);
          row.beta = st.beta;
          row.criterion = out.criterion.series().back();
          fill_gp(sampler, row);
          out.trace.push_back(std::move(row));
          if (densities) {
            for (std::size_t q = 0; q < nq; ++q) {
              const PredictiveMoments m = sampler.query_moments(q);
              if (m.variance > 0.0) {
                const auto [lo, hi] = mixture_window(m.mean, m.variance);
                st.components.ensure_range(lo, hi, config.priors, rng);
              } else {
                const int j = label_of(m.mean);
                st.components.ensure_range(j, j, config.priors, rng);
              }
              out.densities[q].add(conditional_density_curve(
                  {m.mean, m.variance, &st.components}, config.y_grid));
            }
          }
          if (config.store_draws) {
            PosteriorDraw draw;
            draw.sweep = s;
            draw.beta = st.beta;
            draw.z = st.z;
            draw.components = st.components;
            draw.components.prune_outside(st.nmax);
            fill_draw(sampler, draw);
            out.draws.push_back(std::move(draw));
          }
        }
      }
      sampler.sweep_extensions();
    } catch (const SamplerError&) {
      throw;
    } catch (const std::exception& e) {
      throw SamplerError(s, e.what());
    }
    check_support(sampler.state(), data, out.support);
  }
  out.acceptance = acceptance(sampler);
  return out;
}

}  // namespace

ChainOutput run_chain(const Dataset& data, const SamplerConfig& config,
                      Rng& rng) {
  if (config.model == ModelKind::Gp) {
    return drive<GpSampler>(data, config, rng, ModelKind::Gp);
  }
  return drive<IndependenceSampler>(data, config, rng, ModelKind::Independence);
}

}  // namespace lgp
