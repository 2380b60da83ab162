// Apache License, Version 2.0, refer to LICENSE.txt

#include "internal.hpp"

#include <Eigen/Core>
#include <boost/algorithm/string.hpp>
#include <boost/version.hpp>
#include <fmt/format.h>
#include <fstream>

namespace lgp::app {

nlohmann::json manifest_base(const std::string& command, const RunConfig& config) {
  const std::string text = canonical_text(config);
  nlohmann::json settings = nlohmann::json::object();
  std::vector<std::string> lines;
  boost::split(lines, text, boost::is_any_of("\n"));
  for (const auto& line : lines) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    settings[line.substr(0, eq)] = line.substr(eq + 3);
  }
  nlohmann::json m;
  m["tool"] = "lgp";
  m["version"] = LGP_VERSION;
  m["command"] = command;
  m["seed"] = config.seed;
  m["chains"] = config.chains;
  m["config_hash"] = fmt::format("{:016x}", fnv1a(text));
  m["config"] = settings;
  m["libraries"] = {
      {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                            EIGEN_MINOR_VERSION)},
      {"boost", fmt::format("{}.{}.{}", BOOST_VERSION / 100000, BOOST_VERSION / 100 % 1000,
                            BOOST_VERSION % 100)}};
  return m;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << value.dump(2) << '\n';
}

void write_timing(const std::filesystem::path& dir, std::chrono::steady_clock::time_point start) {
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(dir / "timing.json", {{"wall_seconds", seconds}});
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

}  // namespace lgp::app
