#include "nsrel/harness/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "nsrel/errors.hpp"
#include "nsrel/harness/series.hpp"
#include "nsrel/korn.hpp"
#include "nsrel/operators.hpp"

namespace nsrel::harness {

namespace fs = std::filesystem;

namespace {

using Column = double DiagnosticsRecord::*;

std::vector<double> column(std::span<const DiagnosticsRecord> records, Column c) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.*c);
  return out;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string tagged(const std::string& name, int n) { return name + "@" + std::to_string(n); }

std::string refinement_tag(const std::string& name, int coarse, int fine) {
  return name + "@" + std::to_string(coarse) + "->" + std::to_string(fine);
}

bool any_side(const Grid& g, BoundaryKind kind) {
  for (int side = 0; side < 4; ++side)
    if (g.boundary(static_cast<Side>(side)) == kind) return true;
  return false;
}

double mean_dt(const PairRun& run) {
  return run.traj.steps == 0 ? 0.0 : run.traj.states.back().time / static_cast<double>(run.traj.steps);
}

fs::path series_path(const fs::path& out_dir, int n) {
  return out_dir / ("series_n" + std::to_string(n) + ".csv");
}

void emit_series(RunManifest& m, const PairRun& run, const fs::path& out_dir) {
  const fs::path path = series_path(out_dir, run.resolution);
  write_series(run.records, path);
  m.series_files[run.resolution] = path.string();
}

/// L2 distance of the final state from the pair at the final time.
std::pair<double, double> final_errors(const PairRun& run) {
  const State& s = run.traj.states.back();
  const Grid& g = run.grid;
  std::vector<double> er(g.size()), eu(g.size());
  for (int j = 0; j < g.cells(1); ++j)
    for (int i = 0; i < g.cells(0); ++i) {
      const std::size_t k = g.index(i, j);
      const Vec2 x = g.center(i, j);
      const double dr = s.rho[k] - run.pair.density(s.time, x);
      const Vec2 du = s.u.at(k) - run.pair.velocity(s.time, x);
      er[k] = dr * dr;
      eu[k] = dot(du, du);
    }
  return {std::sqrt(ordered_sum(er) * g.cell_volume()), std::sqrt(ordered_sum(eu) * g.cell_volume())};
}

/// Checks every run must pass: the bitwise reduction of the relative
/// inequality to the energy budget, no density clipping, vanishing friction
/// columns without Navier-slip sides and mass conservation without sources.
void common_checks(RunManifest& m, const PairRun& run, bool sourced) {
  const int n = run.resolution;
  if (!run.reference_records.empty()) {
    const auto rei = column(run.reference_records, &DiagnosticsRecord::rei_residual);
    const auto energy = column(run.records, &DiagnosticsRecord::energy_residual);
    double diff = 0.0;
    for (std::size_t k = 0; k < rei.size(); ++k) diff = std::max(diff, std::abs(rei[k] - energy[k]));
    m.add_check(tagged("reduction_bitwise", n), bitwise_equal(rei, energy), diff, 0.0,
                "relative residual against (rho_bar, 0) vs energy budget residual");
  }
  if (!any_side(run.grid, BoundaryKind::NavierSlip)) {
    double f = 0.0;
    for (const auto& r : run.records)
      f = std::max({f, std::abs(r.rem_friction), std::abs(r.rel_friction),
                    std::abs(r.friction_dissipation)});
    m.add_check(tagged("friction_zero", n), f == 0.0, f, 0.0, "no Navier-slip side");
  }
  const double clipped = run.traj.clipped_mass.back();
  m.add_check(tagged("no_clipping", n), clipped == 0.0, clipped, 0.0);
  if (!sourced) {
    const double m0 = run.records.front().mass;
    double drift = 0.0;
    for (const auto& r : run.records) drift = std::max(drift, std::abs(r.mass - m0));
    const double rel = m0 > 0.0 ? drift / m0 : drift;
    m.add_check(tagged("mass_conservation", n), rel <= 1e-12, rel, 1e-12, "relative drift");
  }
}

void refinement_checks(RunManifest& m, const std::string& name, const std::vector<int>& ns,
                       const std::vector<double>& values, double ratio_min) {
  if (values.size() < 2) return;
  const auto ratios = refinement_ratios(values);
  for (std::size_t k = 0; k < ratios.size(); ++k)
    m.add_check(refinement_tag(name, ns[k], ns[k + 1]), ratios[k] >= ratio_min, ratios[k], ratio_min,
                "coarse / fine");
}

double required_tolerance(const ExperimentConfig& cfg, const std::string& name) {
  const auto it = cfg.tolerance.find(name);
  if (it == cfg.tolerance.end())
    throw ConfigError("experiment '" + cfg.experiment + "' requires tolerance." + name);
  return it->second;
}

// ---------------------------------------------------------------------------

void run_equilibrium(const ExperimentConfig& cfg, const fs::path& out, RunManifest& m) {
  if (cfg.pair_family != "equilibrium")
    throw ConfigError("experiment 'equilibrium' requires pair family 'equilibrium'");
  for (int n : cfg.resolutions) {
    const PairRun run = simulate_pair(cfg, n, ForcingMode::None, std::nullopt, cfg.K);
    emit_series(m, run, out);
    common_checks(m, run, false);

    const State& s = run.traj.states.back();
    double dev = 0.0;
    for (std::size_t k = 0; k < s.rho.size(); ++k)
      dev = std::max({dev, std::abs(s.rho[k] - cfg.fluid.rho_bar), norm(s.u.at(k))});
    m.add_check(tagged("fixed_point", n), dev == 0.0, dev, 0.0, "max |rho - rho_bar|, |u|");

    // gronwall_h = K by definition (the constant term); every other column after mass is 0.
    double residual = 0.0;
    for (const auto& r : run.records)
      for (double v : {r.energy, r.dissipation, r.rel_entropy, r.rem_convective, r.rem_viscous,
                       r.rem_force, r.rem_entropy, r.rem_pressure, r.rem_friction, r.rem_total,
                       r.rei_residual, r.energy_residual, r.gronwall_env, r.clipped_mass})
        residual = std::max(residual, std::abs(v));
    m.add_check(tagged("columns_zero", n), residual == 0.0, residual, 0.0);
  }
}

void run_energy_budget(const ExperimentConfig& cfg, const fs::path& out, RunManifest& m,
                       double tol_scale) {
  const double c = required_tolerance(cfg, "energy_envelope_c") * tol_scale;
  const double ratio_min = cfg.tol("ratio_min", 1.5);
  std::vector<double> maxima;
  for (int n : cfg.resolutions) {
    const PairRun run = simulate_pair(cfg, n, ForcingMode::None, std::nullopt, cfg.K);
    emit_series(m, run, out);
    common_checks(m, run, false);

    const double envelope = c * (mean_dt(run) + run.grid.min_spacing());
    const auto res = column(run.records, &DiagnosticsRecord::energy_residual);
    const double worst = max_abs(res);
    maxima.push_back(worst);
    m.metrics[tagged("max_energy_residual", n)] = worst;
    m.add_check(tagged("energy_residual_envelope", n), worst <= envelope, worst, envelope,
                "max |residual| <= C (dt + dx)");

    double rise = 0.0;
    for (std::size_t k = 1; k < run.records.size(); ++k)
      rise = std::max(rise, run.records[k].energy - run.records[k - 1].energy);
    m.add_check(tagged("energy_nonincreasing", n), rise <= envelope, rise, envelope,
                "largest increase between saves");
  }
  refinement_checks(m, "energy_residual_refinement", cfg.resolutions, maxima, ratio_min);
}

void run_mms_convergence(const ExperimentConfig& cfg, const fs::path& out, RunManifest& m) {
  const double lo = cfg.tol("order_min", 0.9);
  const double hi = cfg.tol("order_max", 2.2);
  std::vector<ConvergenceRow> rows;
  for (int n : cfg.resolutions) {
    const PairRun run = simulate_pair(cfg, n, ForcingMode::Manufactured, std::nullopt, cfg.K);
    emit_series(m, run, out);
    common_checks(m, run, true);
    const auto [er, eu] = final_errors(run);
    rows.push_back({n, run.grid.min_spacing(), er, eu});
    m.metrics[tagged("err_rho", n)] = er;
    m.metrics[tagged("err_u", n)] = eu;
  }
  const fs::path table = out / "convergence.csv";
  write_convergence(rows, table);
  m.extra_files.push_back(table.string());
  if (rows.size() < 2) return;

  std::vector<ErrorSample> rho, u;
  for (const auto& r : rows) {
    rho.push_back({r.dx, r.err_rho});
    u.push_back({r.dx, r.err_u});
  }
  const double order_rho = convergence_order(rho);
  const double order_u = convergence_order(u);
  m.metrics["order_rho"] = order_rho;
  m.metrics["order_u"] = order_u;
  m.add_check("order_rho", order_rho >= lo && order_rho <= hi, order_rho, lo,
              "expected in [order_min, order_max]");
  m.add_check("order_u", order_u >= lo && order_u <= hi, order_u, lo,
              "expected in [order_min, order_max]");
}

void run_rei_residual(const ExperimentConfig& cfg, const fs::path& out, RunManifest& m,
                      double tol_scale) {
  const double ratio_min = cfg.tol("ratio_min", 1.5);
  std::vector<double> maxima;
  for (int n : cfg.resolutions) {
    const PairRun run = simulate_pair(cfg, n, ForcingMode::Manufactured, std::nullopt, cfg.K);
    emit_series(m, run, out);
    common_checks(m, run, true);
    const double worst = max_abs(column(run.records, &DiagnosticsRecord::rei_residual));
    maxima.push_back(worst);
    m.metrics[tagged("max_rei_residual", n)] = worst;

    if (cfg.contrast_family) {
      const double tol = required_tolerance(cfg, "contrast_tol") * tol_scale;
      const TestPair other = make_named_pair(*cfg.contrast_family, run.grid, cfg.pair,
                                             run.params.visc, cfg.fluid.rho_bar);
      const AdmissibilityReport rep =
          validate_test_pair(other, run.grid, *run.params.law, cfg.t_final);
      if (!rep.ok()) throw AdmissibilityError("contrast pair is not admissible:\n" + rep.failures());
      const auto records = records_against(run, other, cfg.K);
      const auto res = column(records, &DiagnosticsRecord::rei_residual);
      // residual(0) = 0 by construction; the maximum over later saves is the signal
      const double c = *std::max_element(res.begin() + (res.size() > 1 ? 1 : 0), res.end());
      m.metrics[tagged("max_rei_residual_contrast", n)] = c;
      m.add_check(tagged("contrast_rei", n), c <= tol, c, tol, "max residual <= tol against pair " + *cfg.contrast_family);
    }
  }
  refinement_checks(m, "rei_refinement", cfg.resolutions, maxima, ratio_min);
}

/// Records rescaled from K = 1 to the frozen constant.
std::vector<DiagnosticsRecord> rescale_gronwall(std::vector<DiagnosticsRecord> records, double K) {
  std::vector<double> t(records.size()), h(records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    records[k].gronwall_h *= K;
    t[k] = records[k].time;
    h[k] = records[k].gronwall_h;
  }
  const auto env = gronwall_envelope(records.front().rel_entropy, t, h);
  for (std::size_t k = 0; k < records.size(); ++k) records[k].gronwall_env = env[k];
  return records;
}

void run_weak_strong(const ExperimentConfig& cfg, const fs::path& out, RunManifest& m,
                     double tol_scale) {
  const double c_gap = required_tolerance(cfg, "gap_envelope_c") * tol_scale;
  const double ratio_min = cfg.tol("ratio_min", 1.5);
  std::vector<double> maxima;
  for (int n : cfg.resolutions) {
    const PairRun run = simulate_pair(cfg, n, ForcingMode::Manufactured, std::nullopt, cfg.K);
    emit_series(m, run, out);
    common_checks(m, run, true);
    const double dx = run.grid.min_spacing();
    const WeakStrongReport rep = weak_strong_gap(run.records, c_gap * dx * dx);
    maxima.push_back(rep.max_rel_entropy);
    m.metrics[tagged("max_rel_entropy", n)] = rep.max_rel_entropy;
    m.add_check(tagged("identical_data_envelope", n), rep.inequality_holds, rep.max_rel_entropy,
                rep.tolerance, "E <= envelope + C dx^2");
  }
  refinement_checks(m, "identical_data_refinement", cfg.resolutions, maxima, ratio_min);

  const int total = cfg.calibration_runs + cfg.heldout_runs;
  if (cfg.perturbation == 0.0 || total == 0) return;
  const int n = cfg.perturbation_resolution > 0 ? cfg.perturbation_resolution : cfg.resolutions.front();
  const double safety = cfg.tol("k_safety", 1.25);

  double k_cal = 0.0;
  for (int idx = 0; idx < total; ++idx) {
    const bool calibration = idx < cfg.calibration_runs;
    const PairRun run = simulate_pair(cfg, n, ForcingMode::Manufactured,
                                      static_cast<std::uint64_t>(idx), 1.0);
    common_checks(m, run, true);
    const double k_req = required_gronwall_constant(run.records);
    const std::string label = (calibration ? "calibration" : "heldout") + std::to_string(idx);
    m.metrics["K_required_" + label] = k_req;

    const auto scaled = rescale_gronwall(run.records, cfg.K);
    const fs::path path = out / ("perturbed_" + std::to_string(idx) + "_n" + std::to_string(n) + ".csv");
    write_series(scaled, path);
    m.extra_files.push_back(path.string());

    if (calibration) {
      k_cal = std::max(k_cal, k_req);
      continue;
    }
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = scaled.size() > 1 ? 1 : 0; k < scaled.size(); ++k)
      excess = std::max(excess, scaled[k].rel_entropy - scaled[k].gronwall_env);
    m.add_check("heldout_envelope_" + std::to_string(idx), excess <= 0.0, excess, 0.0,
                "max over t > 0 of E - E0 exp(K int h)");
  }
  if (cfg.calibration_runs > 0) {
    m.metrics["K_calibrated"] = safety * k_cal;
    m.add_check("K_covers_calibration", cfg.K >= k_cal, cfg.K, k_cal,
                "frozen K vs largest constant required on the calibration set");
  }
}

void write_korn_csv(const KornEnsemble& e, const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  os << "sample,ratio,running_sup\n";
  for (std::size_t k = 0; k < e.ratios.size(); ++k)
    os << k << ',' << format_double(e.ratios[k]) << ',' << format_double(e.running_sup[k]) << '\n';
  if (!os) throw IoError("write failed for " + path.string());
}

/// Rigid motion a + omega (-(y - c_y), x - c_x) with dyadic coefficients, so
/// samples and differences are exact.
VectorField rigid_motion(const Grid& g, std::uint64_t k) {
  const double a0 = static_cast<double>(k % 7) / 8.0 - 0.375;
  const double a1 = static_cast<double>(k % 5) / 4.0 - 0.5;
  const double omega = static_cast<double>(k % 3 + 1) / 4.0;
  const double cx = g.origin(0) + 0.5 * g.extent(0);
  const double cy = g.dim() == 2 ? g.origin(1) + 0.5 * g.extent(1) : 0.0;
  return VectorField::sample(g, [&](const Vec2& x) {
    return Vec2{a0 - omega * (x[1] - cy), a1 + omega * (x[0] - cx)};
  });
}

void run_korn(const ExperimentConfig& cfg, const fs::path& out, RunManifest& m, double tol_scale) {
  const double stability = cfg.tol("korn_stability", 0.1) * tol_scale;
  const ViscosityParams visc = cfg.fluid.visc;
  for (int n : cfg.resolutions) {
    const Grid grid = cfg.grid.make(n);
    std::vector<double> constants;
    for (std::uint64_t seed : {cfg.seed, cfg.seed + 1}) {
      const KornEnsemble e = korn_ensemble(grid, visc, seed, cfg.ensemble_size, cfg.korn_modes);
      const fs::path path =
          out / ("korn_n" + std::to_string(n) + "_seed" + std::to_string(seed) + ".csv");
      write_korn_csv(e, path);
      m.extra_files.push_back(path.string());

      const bool finite = std::all_of(e.ratios.begin(), e.ratios.end(),
                                      [](double r) { return std::isfinite(r) && r > 0.0; });
      bool monotone = true;
      for (std::size_t k = 1; k < e.running_sup.size(); ++k)
        monotone &= e.running_sup[k] >= e.running_sup[k - 1];
      const std::string key = std::to_string(n) + "_seed" + std::to_string(seed);
      m.add_check("korn_finite@" + key, finite, static_cast<double>(e.ratios.size()), 0.0);
      m.add_check("korn_running_sup_monotone@" + key, monotone, e.constant, 0.0);
      m.metrics["korn_constant@" + key] = e.constant;
      constants.push_back(e.constant);
    }
    const double spread = std::abs(constants[0] - constants[1]) / std::max(constants[0], constants[1]);
    m.add_check(tagged("korn_seed_stability", n), spread <= stability, spread, stability,
                "relative difference of the two empirical constants");

    double s_max = 0.0;
    bool unweighted_degenerate = true, weighted_finite = true;
    const ScalarField weight(grid, 1.0);
    for (std::uint64_t k = 0; k < 8; ++k) {
      const VectorField z = rigid_motion(grid, k);
      const TensorField s = stress(gradient(z), visc);
      for (int a = 0; a < grid.dim(); ++a)
        for (int b = 0; b < grid.dim(); ++b) s_max = std::max(s_max, max_abs(s.component(a, b)));
      try {
        (void)korn_ratio(z, visc);
        unweighted_degenerate = false;
      } catch (const DegenerateFieldError&) {
      }
      weighted_finite &= std::isfinite(korn_ratio(z, visc, weight));
    }
    m.add_check(tagged("rigid_stress_zero", n), s_max == 0.0, s_max, 0.0);
    m.add_check(tagged("rigid_unweighted_degenerate", n), unweighted_degenerate, 0.0, 0.0,
                "korn_ratio raises DegenerateFieldError");
    m.add_check(tagged("rigid_weighted_finite", n), weighted_finite, 0.0, 0.0, "weight R = 1");
  }
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> registry{
      {"equilibrium", "constant state at rest stays fixed; every residual column is 0"},
      {"energy_budget", "unforced run: energy budget residual within C (dt + dx) and shrinking"},
      {"mms_convergence", "manufactured solution: L2 convergence order of rho and u"},
      {"rei_residual", "manufactured solution tested against itself: relative residual shrinks"},
      {"weak_strong_gap", "relative entropy against the strong pair vs the Gronwall envelope"},
      {"korn_ensemble", "Korn ratios of random zero-boundary fields and rigid motions"},
  };
  return registry;
}

State perturbed_state(const TestPair& pair, const Grid& grid, double amplitude, std::uint64_t seed,
                      std::uint64_t index) {
  const VectorField phi = random_zero_boundary_field(grid, seed, index);
  double scale = 0.0;
  for (int c = 0; c < grid.dim(); ++c) scale = std::max(scale, max_abs(phi.component(c)));
  if (scale == 0.0) scale = 1.0;
  ScalarField rho(grid);
  VectorField u(grid);
  for (int j = 0; j < grid.cells(1); ++j)
    for (int i = 0; i < grid.cells(0); ++i) {
      const std::size_t k = grid.index(i, j);
      const Vec2 x = grid.center(i, j);
      const Vec2 p = (1.0 / scale) * phi.at(k);
      rho[k] = pair.density(0.0, x) * (1.0 + amplitude * p[0]);
      u.set(k, pair.velocity(0.0, x) + amplitude * p);
    }
  return State(0.0, std::move(rho), std::move(u));
}

PairRun simulate_pair(const ExperimentConfig& cfg, int n, ForcingMode mode,
                      std::optional<std::uint64_t> perturbation_index, double K) {
  Grid grid = cfg.grid.make(n);
  FluidParams params = cfg.fluid.make();
  TestPair pair = make_named_pair(cfg.pair_family, grid, cfg.pair, params.visc, cfg.fluid.rho_bar);
  const AdmissibilityReport rep = validate_test_pair(pair, grid, *params.law, cfg.t_final);
  if (!rep.ok())
    throw AdmissibilityError("test pair '" + pair.name() + "' is not admissible:\n" + rep.failures());
  Forcing forcing = mode == ForcingMode::Manufactured ? mms_forcing(pair, grid, params) : Forcing{};

  State initial = perturbation_index
                      ? perturbed_state(pair, grid, cfg.perturbation, cfg.seed, *perturbation_index)
                      : State(0.0, ScalarField::sample(grid, [&](const Vec2& x) { return pair.density(0.0, x); }),
                              VectorField::sample(grid, [&](const Vec2& x) { return pair.velocity(0.0, x); }));

  RunOptions options;
  options.t_final = cfg.t_final;
  options.save_every = cfg.save_every;
  Trajectory traj;
  try {
    traj = run(std::move(initial), params, forcing, options);
  } catch (const DivergenceError& e) {
    throw DivergenceError("resolution " + std::to_string(n) + ": " + e.what(), e.time());
  } catch (const TimeStepCollapseError& e) {
    throw TimeStepCollapseError("resolution " + std::to_string(n) + ": " + e.what(), e.cell());
  }

  auto records = record_trajectory(traj, pair, params, forcing, K);
  std::vector<DiagnosticsRecord> reference;
  if (cfg.fluid.rho_bar > 0.0)
    reference = record_trajectory(traj, constant_pair(grid.dim(), cfg.fluid.rho_bar), params, forcing, K);
  return PairRun{n,         std::move(grid),    std::move(params),   std::move(pair),
                 std::move(forcing), std::move(traj), std::move(records), std::move(reference)};
}

std::vector<DiagnosticsRecord> records_against(const PairRun& run, const TestPair& pair, double K) {
  return record_trajectory(run.traj, pair, run.params, run.forcing, K);
}

bool bitwise_equal(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::bit_cast<std::uint64_t>(a[k]) != std::bit_cast<std::uint64_t>(b[k])) return false;
  return true;
}

RunManifest run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir, double tol_scale) {
  if (!(tol_scale > 0.0)) throw ConfigError("tol-scale must be positive");
  const auto& reg = experiment_registry();
  if (std::none_of(reg.begin(), reg.end(), [&](const auto& e) { return e.name == cfg.experiment; }))
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");

  RunManifest m;
  m.experiment = cfg.experiment;
  m.config_hash = cfg.hash();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  if (cfg.experiment == "equilibrium") run_equilibrium(cfg, out_dir, m);
  else if (cfg.experiment == "energy_budget") run_energy_budget(cfg, out_dir, m, tol_scale);
  else if (cfg.experiment == "mms_convergence") run_mms_convergence(cfg, out_dir, m);
  else if (cfg.experiment == "rei_residual") run_rei_residual(cfg, out_dir, m, tol_scale);
  else if (cfg.experiment == "weak_strong_gap") run_weak_strong(cfg, out_dir, m, tol_scale);
  else run_korn(cfg, out_dir, m, tol_scale);

  write_manifest(m, out_dir / "manifest.json");
  return m;
}

}  // namespace nsrel::harness
