#include "nsrel/harness/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "nsrel/errors.hpp"

namespace nsrel::harness {

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

bool RunManifest::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

void RunManifest::add_check(std::string name, bool ok, double value, double threshold, std::string detail) {
  checks.push_back({std::move(name), ok, value, threshold, std::move(detail)});
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  nlohmann::json j;
  j["experiment"] = m.experiment;
  j["config_hash"] = m.config_hash;
  j["software_version"] = m.software_version;
  j["series_files"] = nlohmann::json::object();
  for (const auto& [n, file] : m.series_files) {
    if (!std::filesystem::exists(file)) throw IoError("manifest references missing file " + file);
    j["series_files"][std::to_string(n)] = file;
  }
  j["extra_files"] = nlohmann::json::array();
  for (const auto& file : m.extra_files) {
    if (!std::filesystem::exists(file)) throw IoError("manifest references missing file " + file);
    j["extra_files"].push_back(file);
  }
  j["checks"] = nlohmann::json::array();
  for (const auto& c : m.checks)
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"value", number(c.value)},
                           {"threshold", number(c.threshold)},
                           {"detail", c.detail}});
  j["metrics"] = nlohmann::json::object();
  for (const auto& [k, v] : m.metrics) j["metrics"][k] = number(v);
  j["passed"] = m.passed();

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing manifest " + path.string());
}

}  // namespace nsrel::harness
