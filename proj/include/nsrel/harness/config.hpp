/// @file config.hpp
/// @brief Experiment configuration: INI schema, validation and hashing.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsrel/grid.hpp"
#include "nsrel/solver.hpp"
#include "nsrel/test_pair.hpp"

namespace nsrel::harness {

struct GridSpec {
  int dim = 2;
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};
  BoundaryKind x_boundary = BoundaryKind::Periodic;
  BoundaryKind y_boundary = BoundaryKind::Periodic;

  /// n cells on every active axis.
  Grid make(int n) const;
};

struct FluidSpec {
  ViscosityParams visc;
  double a = 1.0;
  double gamma = 1.6;
  double rho_bar = 1.0;
  double cfl = 0.4;
  ConvectionScheme scheme = ConvectionScheme::Upwind;
  double artificial_viscosity = 0.25;

  FluidParams make() const;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::optional<std::string> out_dir;

  GridSpec grid;
  std::vector<int> resolutions;
  FluidSpec fluid;

  std::string pair_family;
  PairParams pair;
  std::optional<std::string> contrast_family;

  double t_final = 0.0;
  int save_every = 1;
  double K = 1.0;
  double perturbation = 0.05;
  int perturbation_resolution = 0;  ///< 0 selects the coarsest resolution
  int calibration_runs = 2;
  int heldout_runs = 3;
  int ensemble_size = 1000;
  int korn_modes = 4;

  /// Named thresholds from the [tolerance] section.
  std::map<std::string, double> tolerance;

  /// Threshold by name, or fallback when the config does not set it.
  double tol(const std::string& name, double fallback) const;
  /// Sorted key = value listing of every effective setting.
  std::string canonical_text() const;
  /// SHA-256 of canonical_text(), lowercase hex.
  std::string hash() const;
};

/// Parses INI text. Unknown sections or keys, malformed values and violated
/// invariants throw ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Names accepted in the [tolerance] section.
const std::vector<std::string>& tolerance_names();

}  // namespace nsrel::harness
