/// @file manifest.hpp
/// @brief Run manifest: config hash, emitted files and acceptance checks.
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace nsrel::harness {

inline constexpr const char* kSoftwareVersion = "1.0.0";

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct RunManifest {
  std::string experiment;
  std::string config_hash;
  std::string software_version = kSoftwareVersion;
  std::map<int, std::string> series_files;  ///< resolution -> CSV path
  std::vector<std::string> extra_files;
  std::vector<CheckResult> checks;
  std::map<std::string, double> metrics;

  bool passed() const;
  void add_check(std::string name, bool passed, double value, double threshold, std::string detail = {});
};

/// Writes manifest.json. Throws IoError if a referenced file is missing or
/// the manifest cannot be written.
void write_manifest(const RunManifest& m, const std::filesystem::path& path);

}  // namespace nsrel::harness
