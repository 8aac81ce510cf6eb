#include "nsrel/relentropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsrel/errors.hpp"
#include "nsrel/norms.hpp"
#include "nsrel/operators.hpp"

namespace nsrel {

namespace {

std::vector<PairSample> sample_pair(const TestPair& pair, const Grid& grid, double t) {
  std::vector<PairSample> out(grid.size());
  const long n = static_cast<long>(grid.size());
  const int nx = grid.cells(0);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] =
        pair.sample(t, grid.center(static_cast<int>(k % nx), static_cast<int>(k / nx)));
  return out;
}

void require_positive_density(const std::vector<PairSample>& samples, const TestPair& pair, double t) {
  for (const auto& s : samples)
    if (!(s.r > 0.0) || !std::isfinite(s.r)) {
      std::ostringstream msg;
      msg << "test pair '" << pair.name() << "' has r = " << s.r << " at t = " << t;
      throw AdmissibilityError(msg.str());
    }
}

bool sample_finite(const PairSample& s, const ViscosityParams& visc) {
  const Vec2 ds = stress_divergence(s, visc);
  for (double v : {s.r, s.r_t, s.r_grad[0], s.r_grad[1], s.U[0], s.U[1], s.U_t[0], s.U_t[1],
                   s.U_grad[0][0], s.U_grad[0][1], s.U_grad[1][0], s.U_grad[1][1], ds[0], ds[1]})
    if (!std::isfinite(v)) return false;
  return true;
}

std::vector<double> series(std::span<const DiagnosticsRecord> records,
                           double DiagnosticsRecord::*column, const char* what) {
  std::vector<double> out(records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    out[k] = records[k].*column;
    if (std::isnan(out[k])) throw StructuralError(std::string("diagnostics records lack ") + what);
  }
  return out;
}

RelativeDiagnostics relative_from_samples(const State& s, const std::vector<PairSample>& samples,
                                          const FluidParams& params, const VectorField& f) {
  const Grid& g = s.rho.grid();
  const PressureLaw& law = *params.law;
  const std::size_t n = g.size();
  const int dim = g.dim();

  VectorField w(g), U(g);
  for (std::size_t k = 0; k < n; ++k) {
    U.set(k, samples[k].U);
    w.set(k, s.u.at(k) - samples[k].U);
  }
  const TensorField gw = gradient(w);

  std::vector<double> energy(n), conv(n), visc(n), force(n), entropy(n), pressure(n);
#pragma omp parallel for schedule(static)
  for (long kk = 0; kk < static_cast<long>(n); ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    const PairSample& ps = samples[k];
    const double rho = s.rho[k];
    const Vec2 u = s.u.at(k);
    const Vec2 wk = w.at(k);
    energy[k] = relative_energy_density(rho, wk, ps.r, law);
    const Vec2 accel = ps.U_t + apply(ps.U_grad, u);
    conv[k] = rho * dot(accel, ps.U - u);
    visc[k] = -contract(stress_at(ps.U_grad, dim, params.visc), gw.at(k));
    force[k] = rho * dot(f.at(k), wk);
    const double h2 = law.d2potential(ps.r);
    entropy[k] = (ps.r - rho) * h2 * ps.r_t + h2 * dot(ps.r_grad, ps.r * ps.U - rho * u);
    pressure[k] = -ps.div_U() * (law.pressure(rho) - law.pressure(ps.r));
  }

  const double vol = g.cell_volume();
  RelativeDiagnostics out;
  out.rel_entropy = ordered_sum(energy) * vol;
  out.rel_dissipation = dissipation_pairing(gw, gw, params.visc);
  out.rel_friction = friction_pairing(w, w, params.visc.beta);
  RemainderBreakdown& r = out.remainder;
  r.convective = ordered_sum(conv) * vol;
  r.viscous = ordered_sum(visc) * vol;
  r.force = ordered_sum(force) * vol;
  r.entropy = ordered_sum(entropy) * vol;
  r.pressure = ordered_sum(pressure) * vol;
  r.friction = 0.0 - friction_pairing(U, w, params.visc.beta);
  r.total = r.convective + r.viscous + r.force + r.entropy + r.pressure + r.friction;
  return out;
}

double gronwall_from_samples(const std::vector<PairSample>& samples, const Grid& grid,
                             const FluidParams& params, double K) {
  const std::size_t n = samples.size();
  const double gamma = params.law->gamma();
  const double q = 6.0 * gamma / (5.0 * gamma - 6.0);
  std::vector<double> div_s(n), div_s_over_r(n);
  double grad_inf = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const PairSample& s = samples[k];
    const double m = norm(stress_divergence(s, params.visc));
    div_s[k] = m;
    div_s_over_r[k] = m / s.r;
    grad_inf = std::max(grad_inf, inf_norm(s.U_grad));
  }
  const double vol = grid.cell_volume();
  const double a = lp_norm_of_magnitudes(div_s_over_r, vol, 3.0);
  const double b = std::max(lp_norm_of_magnitudes(div_s, vol, 3.0), lp_norm_of_magnitudes(div_s, vol, q));
  return K * (grad_inf + a * a + b * b + 1.0);
}

}  // namespace

bool AdmissibilityReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string AdmissibilityReport::failures() const {
  std::string out;
  for (const auto& c : checks)
    if (!c.passed) out += c.name + ": " + c.detail + "\n";
  return out;
}

AdmissibilityReport validate_test_pair(const TestPair& pair, const Grid& grid,
                                       const PressureLaw& law, double t_final, int time_samples) {
  if (time_samples < 2) throw DomainError("validate_test_pair: need at least 2 time samples");
  if (!(t_final >= 0.0)) throw DomainError("validate_test_pair: t_final must be >= 0");
  ViscosityParams unit;
  AdmissibilityReport rep;
  rep.r_min = std::numeric_limits<double>::infinity();
  rep.r_max = -std::numeric_limits<double>::infinity();
  bool finite = true;
  std::string finite_detail, boundary_detail;
  bool boundary_ok = pair.dim() == grid.dim();
  if (!boundary_ok) boundary_detail = "dimension mismatch";

  for (int m = 0; m < time_samples && pair.dim() == grid.dim(); ++m) {
    const double t = t_final * m / (time_samples - 1);
    try {
      for (const auto& s : sample_pair(pair, grid, t)) {
        rep.r_min = std::min(rep.r_min, s.r);
        rep.r_max = std::max(rep.r_max, s.r);
        if (finite && !sample_finite(s, unit)) {
          finite = false;
          finite_detail = "non-finite derivative at t = " + std::to_string(t);
        }
      }
      // wall and periodic-edge points
      for (int axis = 0; axis < grid.dim(); ++axis)
        for (int c = 0; c < (grid.dim() == 2 ? grid.cells(1 - axis) : 1); ++c)
          for (double edge : {grid.origin(axis), grid.origin(axis) + grid.extent(axis)}) {
            Vec2 x = grid.center(axis == 0 ? 0 : c, axis == 0 ? c : 0);
            x[axis] = edge;
            const double r = pair.density(t, x);
            rep.r_min = std::min(rep.r_min, r);
            rep.r_max = std::max(rep.r_max, r);
          }
    } catch (const std::exception& e) {
      finite = false;
      finite_detail = std::string("evaluation failed: ") + e.what();
    }
    if (boundary_ok) {
      try {
        require_boundary_compatible(pair, grid, t);
      } catch (const AdmissibilityError& e) {
        boundary_ok = false;
        boundary_detail = e.what();
      }
    }
  }

  std::ostringstream bound;
  bound << "r in [" << rep.r_min << ", " << rep.r_max << "]";
  const bool positive = rep.r_min > 0.0 && std::isfinite(rep.r_max);
  rep.checks.push_back({"density_lower_bound", positive, bound.str()});
  if (finite && positive) {
    // the entropy terms need H''(r) on the sampled range
    finite = std::isfinite(law.d2potential(rep.r_min)) && std::isfinite(law.d2potential(rep.r_max));
    if (!finite) finite_detail = "H'' not finite on the sampled density range";
  }
  rep.checks.push_back({"norms_finite", finite, finite ? "all sampled derivatives finite" : finite_detail});
  rep.checks.push_back({"boundary_compatibility", boundary_ok,
                        boundary_ok ? "compatible with every side" : boundary_detail});
  return rep;
}

double relative_entropy(const State& s, const TestPair& pair, const PressureLaw& law) {
  const Grid& g = s.rho.grid();
  const auto samples = sample_pair(pair, g, s.time);
  require_positive_density(samples, pair, s.time);
  std::vector<double> energy(g.size());
  for (std::size_t k = 0; k < g.size(); ++k)
    energy[k] = relative_energy_density(s.rho[k], s.u.at(k) - samples[k].U, samples[k].r, law);
  return ordered_sum(energy) * g.cell_volume();
}

RelativeDiagnostics relative_diagnostics(const State& s, const TestPair& pair,
                                         const FluidParams& params, const Forcing& forcing) {
  params.validate();
  const Grid& g = s.rho.grid();
  const auto samples = sample_pair(pair, g, s.time);
  require_positive_density(samples, pair, s.time);
  return relative_from_samples(s, samples, params, forcing.acceleration(g, s.time));
}

RemainderBreakdown remainder(const State& s, const TestPair& pair, const FluidParams& params,
                             const Forcing& forcing) {
  return relative_diagnostics(s, pair, params, forcing).remainder;
}

double gronwall_h(const TestPair& pair, const Grid& grid, const FluidParams& params, double t,
                  double K) {
  params.validate();
  if (!(K >= 0.0)) throw DomainError("gronwall_h: K must be >= 0");
  const auto samples = sample_pair(pair, grid, t);
  require_positive_density(samples, pair, t);
  return gronwall_from_samples(samples, grid, params, K);
}

std::vector<double> gronwall_h(const TestPair& pair, const Grid& grid, const FluidParams& params,
                               std::span<const double> times, double K) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(gronwall_h(pair, grid, params, t, K));
  return out;
}

std::vector<double> gronwall_envelope(double E0, std::span<const double> times,
                                      std::span<const double> h) {
  if (!(E0 >= 0.0)) throw DomainError("gronwall_envelope: E0 must be >= 0");
  for (double v : h)
    if (!(v >= 0.0)) throw DomainError("gronwall_envelope: h must be >= 0");
  const auto integral = cumulative_trapezoid(times, h);
  std::vector<double> out(integral.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = E0 * std::exp(integral[k]);
  return out;
}

std::vector<DiagnosticsRecord> record_trajectory(const Trajectory& traj, const TestPair& pair,
                                                 const FluidParams& params, const Forcing& forcing,
                                                 double K) {
  params.validate();
  if (traj.states.empty()) throw StructuralError("record_trajectory: empty trajectory");
  if (traj.clipped_mass.size() != traj.states.size())
    throw StructuralError("record_trajectory: clipped-mass log does not match the states");
  if (!(K >= 0.0)) throw DomainError("record_trajectory: K must be >= 0");
  std::vector<DiagnosticsRecord> records;
  records.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const State& s = traj.states[k];
    const Grid& g = s.rho.grid();
    const VectorField f = forcing.acceleration(g, s.time);
    DiagnosticsRecord rec = energy_diagnostics(s, params, f);
    const auto samples = sample_pair(pair, g, s.time);
    require_positive_density(samples, pair, s.time);
    const RelativeDiagnostics rel = relative_from_samples(s, samples, params, f);
    rec.rel_entropy = rel.rel_entropy;
    rec.rel_dissipation = rel.rel_dissipation;
    rec.rel_friction = rel.rel_friction;
    rec.rem_convective = rel.remainder.convective;
    rec.rem_viscous = rel.remainder.viscous;
    rec.rem_force = rel.remainder.force;
    rec.rem_entropy = rel.remainder.entropy;
    rec.rem_pressure = rel.remainder.pressure;
    rec.rem_friction = rel.remainder.friction;
    rec.rem_total = rel.remainder.total;
    rec.gronwall_h = gronwall_from_samples(samples, g, params, K);
    rec.clipped_mass = traj.clipped_mass[k];
    records.push_back(rec);
  }

  const auto rei = rei_residual(records);
  const auto energy = energy_budget_residual(records);
  const auto t = series(records, &DiagnosticsRecord::time, "time");
  const auto h = series(records, &DiagnosticsRecord::gronwall_h, "gronwall_h");
  const auto env = gronwall_envelope(records.front().rel_entropy, t, h);
  for (std::size_t k = 0; k < records.size(); ++k) {
    records[k].rei_residual = rei[k];
    records[k].energy_residual = energy[k];
    records[k].gronwall_env = env[k];
  }
  return records;
}

std::vector<double> rei_residual(std::span<const DiagnosticsRecord> records) {
  const auto t = series(records, &DiagnosticsRecord::time, "time");
  const auto e = series(records, &DiagnosticsRecord::rel_entropy, "rel_entropy");
  const auto d = series(records, &DiagnosticsRecord::rel_dissipation, "rel_dissipation");
  const auto b = series(records, &DiagnosticsRecord::rel_friction, "rel_friction");
  const auto r = series(records, &DiagnosticsRecord::rem_total, "rem_total");
  return budget_residual(t, e, d, b, r);
}

WeakStrongReport weak_strong_gap(std::span<const DiagnosticsRecord> records, double tolerance) {
  if (!(tolerance >= 0.0)) throw DomainError("weak_strong_gap: tolerance must be >= 0");
  WeakStrongReport rep;
  rep.time = series(records, &DiagnosticsRecord::time, "time");
  rep.rel_entropy = series(records, &DiagnosticsRecord::rel_entropy, "rel_entropy");
  rep.envelope = series(records, &DiagnosticsRecord::gronwall_env, "gronwall_env");
  rep.e0 = rep.rel_entropy.front();
  rep.tolerance = tolerance;
  rep.inequality_holds = true;
  for (std::size_t k = 0; k < rep.time.size(); ++k) {
    rep.max_rel_entropy = std::max(rep.max_rel_entropy, rep.rel_entropy[k]);
    if (!(rep.rel_entropy[k] <= rep.envelope[k] + tolerance)) rep.inequality_holds = false;
  }
  return rep;
}

std::vector<double> refinement_ratios(std::span<const double> values) {
  if (values.size() < 2) throw StructuralError("refinement_ratios: need at least two levels");
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) out.push_back(values[k] / values[k + 1]);
  return out;
}

double required_gronwall_constant(std::span<const DiagnosticsRecord> records_k1) {
  const auto t = series(records_k1, &DiagnosticsRecord::time, "time");
  const auto e = series(records_k1, &DiagnosticsRecord::rel_entropy, "rel_entropy");
  const auto h = series(records_k1, &DiagnosticsRecord::gronwall_h, "gronwall_h");
  if (!(e.front() > 0.0)) throw DomainError("required_gronwall_constant: E(0) must be > 0");
  const auto integral = cumulative_trapezoid(t, h);
  double K = 0.0;
  for (std::size_t k = 1; k < e.size(); ++k)
    if (e[k] > e.front() && integral[k] > 0.0) K = std::max(K, std::log(e[k] / e.front()) / integral[k]);
  return K;
}

}  // namespace nsrel
