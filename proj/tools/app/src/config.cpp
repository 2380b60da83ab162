// Apache License, Version 2.0, refer to LICENSE.txt

#include "lgp/app/config.hpp"

#include <fmt/format.h>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <map>
#include <set>
#include <algorithm>
#include <cmath>

#include "lgp/errors.hpp"

namespace lgp::app {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split_list(const std::string& text, const char* seps) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(seps), boost::token_compress_on);
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  }
}

long to_long(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != std::floor(v)) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + text + "'");
  }
  return static_cast<long>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = boost::to_lower_copy(text);
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ConfigError("config: '" + key + "' expects true/false, got '" + text + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split_list(text, ", \t")) out.push_back(to_double(key, p));
  return out;
}

// Reads a section's keys through typed accessors and rejects leftovers.
class Section {
 public:
  Section(const pt::ptree& tree, std::string name) : name_(std::move(name)) {
    if (auto child = tree.get_child_optional(name_)) {
      for (const auto& [k, v] : *child) values_[k] = boost::trim_copy(v.data());
    }
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }

  std::string full(const std::string& key) const { return name_ + "." + key; }

  void number(const std::string& key, double& target) {
    if (auto v = take(key)) target = to_double(full(key), *v);
  }
  template <class Int>
  void integer(const std::string& key, Int& target) {
    if (auto v = take(key)) target = static_cast<Int>(to_long(full(key), *v));
  }
  void flag(const std::string& key, bool& target) {
    if (auto v = take(key)) target = to_bool(full(key), *v);
  }
  void text(const std::string& key, std::string& target) {
    if (auto v = take(key)) target = *v;
  }

  void finish() const {
    if (!values_.empty()) {
      throw ConfigError("config: unknown key '" + full(values_.begin()->first) + "'");
    }
  }

 private:
  std::string name_;
  std::map<std::string, std::string> values_;
};

}  // namespace

Preset parse_preset(const std::string& name) {
  if (name == "paper") return Preset::Paper;
  if (name == "desk") return Preset::Desk;
  throw ConfigError("unknown preset '" + name + "' (expected paper or desk)");
}

RunConfig default_config() {
  RunConfig c;
  apply_preset(c, Preset::Desk);
  return c;
}

void apply_preset(RunConfig& config, Preset preset) {
  if (preset == Preset::Paper) {
    config.sampler.sweeps = 150000;
    config.sampler.burnin = 75000;
  } else {
    config.sampler.sweeps = 20000;
    config.sampler.burnin = 10000;
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  static const std::set<std::string> known = {"data", "model", "priors", "sampler",
                                              "predict", "weights"};
  for (const auto& [name, child] : tree) {
    if (!known.count(name) || child.empty()) {
      throw ConfigError("config: unknown section or top-level key '" + name + "'");
    }
  }

  RunConfig c = default_config();
  c.source = path;
  c.name = path.stem().string();

  Section data(tree, "data");
  data.text("input", c.data.input);
  if (!c.data.input.empty() && path.has_parent_path() &&
      std::filesystem::path(c.data.input).is_relative()) {
    c.data.input = (path.parent_path() / c.data.input).string();
  }
  data.text("response", c.data.response);
  if (auto v = data.take("covariates")) c.data.covariates = split_list(*v, ", \t");
  if (auto v = data.take("coordinates")) c.data.coordinates = split_list(*v, ", \t");
  data.integer("space_dims", c.data.space_dims);
  data.flag("standardize", c.data.standardize);
  if (auto v = data.take("scenario")) {
    sim::SimSpec spec;
    try {
      spec.scenario = sim::parse_scenario(*v);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    c.data.scenario = spec;
  }
  if (auto v = data.take("noise_variance")) {
    if (!c.data.scenario) throw ConfigError("config: data.noise_variance needs data.scenario");
    c.data.scenario->noise_variance = to_double(data.full("noise_variance"), *v);
  }
  if (auto v = data.take("sim_seed")) {
    if (!c.data.scenario) throw ConfigError("config: data.sim_seed needs data.scenario");
    const long seed = to_long(data.full("sim_seed"), *v);
    if (seed < 0) throw ConfigError("config: data.sim_seed must be >= 0");
    c.data.scenario->seed = static_cast<std::uint64_t>(seed);
  }
  data.finish();
  if (c.data.scenario && !c.data.input.empty()) {
    throw ConfigError("config: data.input and data.scenario are exclusive");
  }

  Section model(tree, "model");
  if (auto v = model.take("type")) {
    try {
      c.sampler.model = parse_model_kind(*v);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  if (auto v = model.take("family")) {
    try {
      c.sampler.kernel.family = parse_correlation_family(*v);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  model.number("phi1", c.sampler.kernel.phi1);
  model.number("phi2", c.sampler.kernel.phi2);
  model.number("jitter", c.sampler.kernel.jitter);
  if (auto v = model.take("phi_mode")) {
    if (*v == "fixed") {
      c.sampler.phi_mode = PhiMode::Fixed;
    } else if (*v == "random-walk") {
      c.sampler.phi_mode = PhiMode::RandomWalk;
    } else {
      throw ConfigError("config: model.phi_mode must be fixed or random-walk");
    }
  }
  model.number("phi_step", c.sampler.phi_step);
  model.number("lambda_step", c.sampler.lambda_step);
  model.text("name", c.name);
  model.finish();
  c.sampler.kernel.space_dims = c.data.space_dims;

  Section priors(tree, "priors");
  if (auto v = priors.take("mu_mean")) {
    if (*v == "empirical") {
      c.priors.mu_mean_empirical = true;
    } else {
      c.priors.mu_mean = to_double(priors.full("mu_mean"), *v);
    }
  }
  priors.number("mu_var", c.priors.mu_var);
  priors.number("sigma_shape", c.priors.sigma_shape);
  priors.number("sigma_rate", c.priors.sigma_rate);
  priors.number("beta_var", c.priors.beta_var);
  priors.number("c_shape", c.priors.c_shape);
  priors.number("c_rate", c.priors.c_rate);
  priors.number("log_phi1_mean", c.priors.log_phi1_mean);
  priors.number("log_phi1_sd", c.priors.log_phi1_sd);
  priors.number("lambda_var", c.priors.lambda_var);
  priors.finish();

  Section sampler(tree, "sampler");
  if (auto v = sampler.take("preset")) {
    apply_preset(c, parse_preset(*v));
  }
  sampler.integer("sweeps", c.sampler.sweeps);
  sampler.integer("burnin", c.sampler.burnin);
  sampler.integer("thin", c.sampler.thin);
  sampler.integer("chains", c.chains);
  if (auto v = sampler.take("seed")) {
    const long seed = to_long(sampler.full("seed"), *v);
    if (seed < 0) throw ConfigError("config: sampler.seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  sampler.integer("joint_moves", c.sampler.joint_moves);
  sampler.number("initial_label_range", c.sampler.initial_label_range);
  sampler.flag("store_draws", c.sampler.store_draws);
  if (auto v = sampler.take("out")) c.out = *v;
  sampler.finish();

  Section predict(tree, "predict");
  if (auto v = predict.take("points")) {
    for (const auto& row : split_list(*v, ";")) {
      const std::vector<double> vals = to_doubles(predict.full("points"), row);
      c.predict_points.push_back(
          Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size())));
    }
  }
  predict.number("grid_lo", c.grid_lo);
  predict.number("grid_hi", c.grid_hi);
  predict.integer("grid_n", c.grid_n);
  predict.text("fit_dir", c.fit_dir);
  predict.finish();

  Section weights(tree, "weights");
  if (auto v = weights.take("x")) c.weights.x = to_doubles(weights.full("x"), *v);
  if (auto v = weights.take("eta")) c.weights.eta = to_doubles(weights.full("eta"), *v);
  weights.number("x_lo", c.weights.x_lo);
  weights.number("x_hi", c.weights.x_hi);
  weights.integer("x_n", c.weights.x_n);
  weights.number("eta_intercept", c.weights.eta_intercept);
  weights.number("eta_slope", c.weights.eta_slope);
  weights.number("sigma_c2", c.weights.sigma_c2);
  weights.number("component_mean_offset", c.weights.component_mean_offset);
  weights.number("component_variance", c.weights.component_variance);
  weights.integer("axis", c.weights.axis);
  weights.text("fit_dir", c.weights.fit_dir);
  weights.finish();

  if (c.weights.x.size() != c.weights.eta.size()) {
    throw ConfigError("config: weights.x and weights.eta need the same length");
  }
  if (c.chains < 1) throw ConfigError("config: sampler.chains must be >= 1");
  if (c.grid_n < 0 || (c.grid_n > 0 && !(c.grid_lo < c.grid_hi))) {
    throw ConfigError("config: predict grid needs grid_lo < grid_hi");
  }
  return c;
}

SamplerConfig resolve_sampler(const RunConfig& config, const Dataset& data) {
  SamplerConfig s = config.sampler;
  const Eigen::Index p = data.dim();
  const PriorConfig& pc = config.priors;
  s.priors = Priors::defaults(p);
  if (pc.mu_mean_empirical) {
    s.priors.mu_mean = data.y.mean();
  } else if (pc.mu_mean) {
    s.priors.mu_mean = *pc.mu_mean;
  }
  s.priors.mu_var = pc.mu_var;
  s.priors.sigma_shape = pc.sigma_shape;
  s.priors.sigma_rate = pc.sigma_rate;
  s.priors.beta_cov = pc.beta_var * Eigen::MatrixXd::Identity(p + 1, p + 1);
  s.priors.c_shape = pc.c_shape;
  s.priors.c_rate = pc.c_rate;
  s.priors.log_phi1_mean = pc.log_phi1_mean;
  s.priors.log_phi1_sd = pc.log_phi1_sd;
  s.priors.lambda_var = pc.lambda_var;
  s.kernel.space_dims = config.data.space_dims;

  s.query_points.clear();
  for (const auto& raw : config.predict_points) {
    if (raw.size() != p + data.coords.cols()) {
      throw ConfigError(fmt::format(
          "config: predict point has {} values, expected {} covariates{}", raw.size(), p,
          data.coords.cols() > 0 ? fmt::format(" + {} coordinates", data.coords.cols())
                                 : std::string()));
    }
    Eigen::VectorXd row = raw;
    if (data.standardization) row.head(p) = data.standardization->apply(raw.head(p));
    s.query_points.push_back(row);
  }
  if (config.grid_n > 0) {
    s.y_grid = Eigen::VectorXd::LinSpaced(config.grid_n, config.grid_lo, config.grid_hi);
  } else {
    s.y_grid.resize(0);
  }
  try {
    s.validate(p);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return s;
}

std::string canonical_text(const RunConfig& c) {
  std::vector<std::string> lines;
  auto put = [&](const std::string& k, const std::string& v) { lines.push_back(k + " = " + v); };
  auto join = [](const std::vector<std::string>& v) { return boost::join(v, ","); };
  put("data.input", c.data.input);
  put("data.response", c.data.response);
  put("data.covariates", join(c.data.covariates));
  put("data.coordinates", join(c.data.coordinates));
  put("data.space_dims", fmt::format("{}", c.data.space_dims));
  put("data.standardize", c.data.standardize ? "true" : "false");
  if (c.data.scenario) {
    put("data.scenario", sim::to_string(c.data.scenario->scenario));
    put("data.noise_variance", fmt::format("{}", c.data.scenario->noise_variance));
    put("data.sim_seed", fmt::format("{}", c.data.scenario->seed));
  }
  put("model.type", to_string(c.sampler.model));
  put("model.family", to_string(c.sampler.kernel.family));
  put("model.phi1", fmt::format("{}", c.sampler.kernel.phi1));
  put("model.phi2", fmt::format("{}", c.sampler.kernel.phi2));
  put("model.jitter", fmt::format("{}", c.sampler.kernel.jitter));
  put("model.phi_mode", c.sampler.phi_mode == PhiMode::Fixed ? "fixed" : "random-walk");
  put("model.phi_step", fmt::format("{}", c.sampler.phi_step));
  put("model.lambda_step", fmt::format("{}", c.sampler.lambda_step));
  put("priors.mu_mean", c.priors.mu_mean_empirical ? "empirical"
                        : fmt::format("{}", c.priors.mu_mean.value_or(0.0)));
  put("priors.mu_var", fmt::format("{}", c.priors.mu_var));
  put("priors.sigma_shape", fmt::format("{}", c.priors.sigma_shape));
  put("priors.sigma_rate", fmt::format("{}", c.priors.sigma_rate));
  put("priors.beta_var", fmt::format("{}", c.priors.beta_var));
  put("priors.c_shape", fmt::format("{}", c.priors.c_shape));
  put("priors.c_rate", fmt::format("{}", c.priors.c_rate));
  put("priors.log_phi1_mean", fmt::format("{}", c.priors.log_phi1_mean));
  put("priors.log_phi1_sd", fmt::format("{}", c.priors.log_phi1_sd));
  put("priors.lambda_var", fmt::format("{}", c.priors.lambda_var));
  put("sampler.sweeps", fmt::format("{}", c.sampler.sweeps));
  put("sampler.burnin", fmt::format("{}", c.sampler.burnin));
  put("sampler.thin", fmt::format("{}", c.sampler.thin));
  put("sampler.chains", fmt::format("{}", c.chains));
  put("sampler.seed", fmt::format("{}", c.seed));
  put("sampler.joint_moves", fmt::format("{}", c.sampler.joint_moves));
  put("sampler.initial_label_range", fmt::format("{}", c.sampler.initial_label_range));
  put("sampler.store_draws", c.sampler.store_draws ? "true" : "false");
  std::vector<std::string> pts;
  for (const auto& p : c.predict_points) {
    std::vector<std::string> v;
    for (Eigen::Index k = 0; k < p.size(); ++k) v.push_back(fmt::format("{}", p[k]));
    pts.push_back(boost::join(v, " "));
  }
  put("predict.points", boost::join(pts, ";"));
  put("predict.grid", fmt::format("{} {} {}", c.grid_lo, c.grid_hi, c.grid_n));
  std::sort(lines.begin(), lines.end());
  return boost::join(lines, "\n") + "\n";
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace lgp::app
