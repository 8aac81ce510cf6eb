/// @file experiments.hpp
/// @brief Experiment registry and the building blocks shared by experiments
/// and the acceptance suite.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsrel/harness/config.hpp"
#include "nsrel/harness/manifest.hpp"
#include "nsrel/relentropy.hpp"

namespace nsrel::harness {

struct ExperimentInfo {
  std::string name;
  std::string description;
};

const std::vector<ExperimentInfo>& experiment_registry();

enum class ForcingMode {
  Manufactured,  ///< sources that make the configured pair an exact solution
  None,          ///< f = 0, no mass source
};

/// One trajectory at one resolution together with its diagnostics.
struct PairRun {
  int resolution = 0;
  Grid grid;
  FluidParams params;
  TestPair pair;
  Forcing forcing;
  Trajectory traj;
  std::vector<DiagnosticsRecord> records;            ///< against the configured pair
  std::vector<DiagnosticsRecord> reference_records;  ///< against (rho_bar, 0); empty if rho_bar = 0
};

/// Initial data equal to the pair at t = 0 plus a smooth boundary-compatible
/// disturbance of relative size amplitude in rho and absolute size amplitude in u.
State perturbed_state(const TestPair& pair, const Grid& grid, double amplitude, std::uint64_t seed,
                      std::uint64_t index);

/// Runs the configured pair at resolution n. Without perturbation_index the
/// initial data are the pair sampled at t = 0. Throws AdmissibilityError when
/// the pair fails validate_test_pair.
PairRun simulate_pair(const ExperimentConfig& cfg, int n, ForcingMode mode,
                      std::optional<std::uint64_t> perturbation_index, double K);

/// Same, against an explicitly given pair (used for contrast pairs).
std::vector<DiagnosticsRecord> records_against(const PairRun& run, const TestPair& pair, double K);

/// Exact bitwise equality of two series.
bool bitwise_equal(std::span<const double> a, std::span<const double> b);

/// Executes the experiment at every resolution, writes CSVs and manifest.json
/// under out_dir and returns the manifest. Absolute tolerances from the config
/// are multiplied by tol_scale. Throws ConfigError for unknown experiments.
RunManifest run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                           double tol_scale = 1.0);

}  // namespace nsrel::harness
