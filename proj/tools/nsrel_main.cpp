/// @file nsrel_main.cpp
/// @brief Command-line front end: run, validate and list experiments, and
/// estimate convergence orders from CSV tables.
///
/// Exit codes: 0 pass, 1 check failure, 2 usage or config error, 3 solver divergence.

#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsrel/errors.hpp"
#include "nsrel/harness/config.hpp"
#include "nsrel/harness/experiments.hpp"
#include "nsrel/harness/series.hpp"

namespace fs = std::filesystem;
using namespace nsrel;
using namespace nsrel::harness;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsageError = 2;
constexpr int kDivergence = 3;

constexpr const char* kOutDirEnv = "NSREL_OUT_DIR";

fs::path resolve_out_dir(const std::string& flag, const ExperimentConfig& cfg) {
  if (!flag.empty()) return flag;
  if (cfg.out_dir) return *cfg.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "nsrel_out";
}

int cmd_run(const std::string& path, const std::string& out_flag, std::optional<std::uint64_t> seed,
            double tol_scale) {
  ExperimentConfig cfg = load_config(path);
  if (seed) cfg.seed = *seed;
  const fs::path out = resolve_out_dir(out_flag, cfg);
  const RunManifest m = run_experiment(cfg, out, tol_scale);
  for (const auto& c : m.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
              << " threshold=" << format_double(c.threshold)
              << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
  for (const auto& [name, value] : m.metrics) std::cout << "metric " << name << " = " << format_double(value) << '\n';
  std::cout << "manifest " << (out / "manifest.json").string() << '\n';
  std::cout << (m.passed() ? "RESULT PASS" : "RESULT FAIL") << '\n';
  return m.passed() ? kPass : kCheckFailure;
}

int cmd_validate(const std::string& path) {
  const ExperimentConfig cfg = load_config(path);
  std::cout << "config " << path << " ok, hash " << cfg.hash() << '\n';
  if (cfg.experiment == "korn_ensemble") return kPass;
  bool ok = true;
  const FluidParams params = cfg.fluid.make();
  for (int n : cfg.resolutions) {
    const Grid grid = cfg.grid.make(n);
    const TestPair pair =
        make_named_pair(cfg.pair_family, grid, cfg.pair, params.visc, cfg.fluid.rho_bar);
    const AdmissibilityReport rep = validate_test_pair(pair, grid, *params.law, cfg.t_final);
    for (const auto& c : rep.checks)
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << '@' << n
                << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
    ok &= rep.ok();
  }
  return ok ? kPass : kUsageError;
}

int cmd_order(const std::vector<std::string>& files) {
  for (const auto& f : files) {
    const auto rows = read_convergence(f);
    std::vector<ErrorSample> rho, u;
    for (const auto& r : rows) {
      rho.push_back({r.dx, r.err_rho});
      u.push_back({r.dx, r.err_u});
    }
    std::cout << f << ": order_rho=" << format_double(convergence_order(rho))
              << " order_u=" << format_double(convergence_order(u)) << '\n';
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsrel: compressible Navier-Stokes relative entropy diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  double tol_scale = 1.0;
  app.add_option("--out-dir", out_dir, std::string("Output directory (default: config, then $") +
                                           kOutDirEnv + ", then ./nsrel_out)");
  app.add_option("--threads", threads, "OpenMP thread count (0 keeps the runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--tol-scale", tol_scale, "Multiplier for absolute tolerances")
      ->check(CLI::PositiveNumber);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  auto* list = app.add_subcommand("list-experiments", "List registered experiments");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse a config and check its test pair");
  validate->add_option("config", validate_path, "Config file")->required()->check(CLI::ExistingFile);

  std::vector<std::string> order_files;
  auto* order = app.add_subcommand("order", "Convergence orders from convergence CSV tables");
  order->add_option("csv", order_files, "Tables with header resolution,dx,err_rho,err_u")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsageError;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*run) return cmd_run(config_path, out_dir, seed, tol_scale);
    if (*list) {
      for (const auto& e : experiment_registry()) std::cout << e.name << "  " << e.description << '\n';
      return kPass;
    }
    if (*validate) return cmd_validate(validate_path);
    if (*order) return cmd_order(order_files);
  } catch (const DivergenceError& e) {
    std::cerr << "solver divergence at t = " << e.time() << ": " << e.what() << '\n';
    return kDivergence;
  } catch (const TimeStepCollapseError& e) {
    std::cerr << "time step collapse at cell " << e.cell() << ": " << e.what() << '\n';
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
