/// @file diagnostics.hpp
/// @brief Per-save diagnostics rows, energy accounting and manufactured forcing.
#pragma once

#include <limits>
#include <span>
#include <vector>

#include "nsrel/solver.hpp"
#include "nsrel/test_pair.hpp"

namespace nsrel {

/// One row per saved state. Fields not yet computed hold NaN.
struct DiagnosticsRecord {
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

  double time = kUnset;
  double mass = kUnset;
  double energy = kUnset;
  double dissipation = kUnset;           ///< int S(grad u) : grad u
  double friction_dissipation = kUnset;  ///< beta oint |u_tan|^2 over Navier-slip sides
  double force_power = kUnset;           ///< int rho f . u
  double rel_entropy = kUnset;
  double rel_dissipation = kUnset;       ///< int S(grad(u - U)) : grad(u - U)
  double rel_friction = kUnset;          ///< beta oint |u_tan - U_tan|^2
  double rem_convective = kUnset;
  double rem_viscous = kUnset;
  double rem_force = kUnset;
  double rem_entropy = kUnset;
  double rem_pressure = kUnset;
  double rem_friction = kUnset;
  double rem_total = kUnset;
  double rei_residual = kUnset;
  double energy_residual = kUnset;
  double gronwall_h = kUnset;
  double gronwall_env = kUnset;
  double clipped_mass = kUnset;
};

/// beta * oint v_tan . w_tan over the Navier-slip sides, with wall traces
/// extrapolated as (3 v_0 - v_1) / 2. Zero when no side is Navier-slip.
double friction_pairing(const VectorField& v, const VectorField& w, double beta);

/// mass, energy, dissipation, friction_dissipation and force_power of one state.
DiagnosticsRecord energy_diagnostics(const State& s, const FluidParams& params,
                                     const Forcing& forcing);
/// Same, with the body acceleration already sampled at s.time.
DiagnosticsRecord energy_diagnostics(const State& s, const FluidParams& params,
                                     const VectorField& accel);

/// Cumulative trapezoid integral of values over t, starting at 0.
std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> values);

/// level(tau) + int_0^tau (dissipation + friction) - level(0) - int_0^tau source,
/// the common form of the energy budget and the relative energy inequality.
std::vector<double> budget_residual(std::span<const double> t, std::span<const double> level,
                                    std::span<const double> dissipation,
                                    std::span<const double> friction,
                                    std::span<const double> source);

/// E(tau) + int (S(grad u):grad u + beta oint |u|^2) - E(0) - int rho f . u.
/// Throws StructuralError when a record misses one of those columns.
std::vector<double> energy_budget_residual(std::span<const DiagnosticsRecord> records);

/// Throws AdmissibilityError when the pair's compatibility tag or its sampled
/// boundary values do not fit the grid's walls.
void require_boundary_compatible(const TestPair& pair, const Grid& grid, double t);

/// Sources that make (r, U) an exact solution:
///   g_mass = d_t r + div(r U)
///   g_mom  = d_t(r U) + div(r U (x) U) + grad p(r) - div S(grad U),
/// supplied to the integrator as the mass source and the body acceleration
/// f = g_mom / r. Throws AdmissibilityError for incompatible pairs.
Forcing mms_forcing(const TestPair& pair, const Grid& grid, const FluidParams& params);

/// g_mass and g_mom at one point.
struct MmsSources {
  double mass = 0.0;
  Vec2 momentum{};
};
MmsSources mms_sources(const PairSample& s, int dim, const FluidParams& params);

}  // namespace nsrel
