/// @file relentropy.hpp
/// @brief Relative entropy of a state with respect to a test pair, the
/// remainder functional, the relative energy inequality residual and the
/// Gronwall envelope.
///
///   E(tau) + int_0^tau int (S(grad u) - S(grad U)) : grad(u - U)
///          + int_0^tau beta oint |u - U|^2  <=  E(0) + int_0^tau R dt
#pragma once

#include <span>
#include <string>
#include <vector>

#include "nsrel/diagnostics.hpp"
#include "nsrel/solver.hpp"
#include "nsrel/test_pair.hpp"

namespace nsrel {

struct AdmissibilityCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AdmissibilityReport {
  std::vector<AdmissibilityCheck> checks;
  double r_min = 0.0;
  double r_max = 0.0;

  bool ok() const;
  /// Names and details of the failing checks, one per line.
  std::string failures() const;
};

/// Dense space-time sampling of the pair on [0, t_final] x grid (cell centres
/// and wall points):
///   density_lower_bound   min r > 0
///   norms_finite          r, grad r, d_t r, U, grad U, d_t U and div S(grad U) finite
///   boundary_compatibility  no-slip / slip / periodic conditions at every sampled time
AdmissibilityReport validate_test_pair(const TestPair& pair, const Grid& grid,
                                       const PressureLaw& law, double t_final,
                                       int time_samples = 9);

/// int (1/2 rho |u - U|^2 + bregman(rho, r)) dx at s.time.
/// Throws AdmissibilityError if r <= 0 at a cell centre.
double relative_entropy(const State& s, const TestPair& pair, const PressureLaw& law);

struct RemainderBreakdown {
  double convective = 0.0;  ///< int rho (d_t U + u . grad U) . (U - u)
  double viscous = 0.0;     ///< int S(grad U) : grad(U - u)
  double force = 0.0;       ///< int rho f . (u - U)
  double entropy = 0.0;     ///< int (r - rho) d_t H'(r) + grad H'(r) . (r U - rho u)
  double pressure = 0.0;    ///< -int div U (p(rho) - p(r))
  double friction = 0.0;    ///< -beta oint U . (u - U), Navier-slip sides only
  double total = 0.0;       ///< sum of the above in this order
};

struct RelativeDiagnostics {
  double rel_entropy = 0.0;
  double rel_dissipation = 0.0;  ///< int S(grad(u - U)) : grad(u - U)
  double rel_friction = 0.0;     ///< beta oint |u - U|^2
  RemainderBreakdown remainder;
};

/// Evaluates every state-dependent functional in one pass. f is the body
/// acceleration of forcing at s.time. d_t H'(r) and grad H'(r) use the
/// chain rule with H''(r) = p'(r) / r on the analytic pair derivatives.
RelativeDiagnostics relative_diagnostics(const State& s, const TestPair& pair,
                                         const FluidParams& params, const Forcing& forcing);

RemainderBreakdown remainder(const State& s, const TestPair& pair, const FluidParams& params,
                             const Forcing& forcing);

/// h(t) = K (|grad U|_inf + |div S(grad U) / r|_{L3}^2 + |div S(grad U)|_{L3 cap Lq}^2 + 1)
/// with q = 6 gamma / (5 gamma - 6) and |.|_{L3 cap Lq} = max of the two norms.
/// |grad U|_inf is the largest induced infinity-norm over cell centres.
/// Throws AdmissibilityError when r is not bounded away from 0 and infinity.
double gronwall_h(const TestPair& pair, const Grid& grid, const FluidParams& params, double t,
                  double K);
std::vector<double> gronwall_h(const TestPair& pair, const Grid& grid, const FluidParams& params,
                               std::span<const double> times, double K);

/// E0 * exp(cumulative trapezoid of h). Throws DomainError on negative or NaN h.
std::vector<double> gronwall_envelope(double E0, std::span<const double> times,
                                      std::span<const double> h);

/// Diagnostics for every saved state of a trajectory: energy columns, relative
/// columns against the pair, both residuals, the Gronwall columns and the
/// cumulative clipped mass.
std::vector<DiagnosticsRecord> record_trajectory(const Trajectory& traj, const TestPair& pair,
                                                 const FluidParams& params, const Forcing& forcing,
                                                 double K);

/// Residual of the relative energy inequality from the relative columns.
/// Throws StructuralError when a record misses one of them.
std::vector<double> rei_residual(std::span<const DiagnosticsRecord> records);

struct WeakStrongReport {
  std::vector<double> time;
  std::vector<double> rel_entropy;
  std::vector<double> envelope;
  double e0 = 0.0;
  double max_rel_entropy = 0.0;
  double tolerance = 0.0;
  /// E(tau) <= envelope(tau) + tolerance at every saved time.
  bool inequality_holds = false;
};

WeakStrongReport weak_strong_gap(std::span<const DiagnosticsRecord> records, double tolerance);

/// Successive ratios values[k] / values[k + 1] of a per-resolution sequence
/// ordered from coarse to fine.
std::vector<double> refinement_ratios(std::span<const double> values);

/// Smallest K for which E(tau) <= E(0) exp(K int_0^tau h_1) holds on the
/// records, where h_1 is the gronwall_h column computed with K = 1. Returns 0
/// when E never exceeds E(0). Throws DomainError when E(0) <= 0.
double required_gronwall_constant(std::span<const DiagnosticsRecord> records_k1);

}  // namespace nsrel
