/// @file solver.hpp
/// @brief Explicit finite-volume integrator for the barotropic compressible
/// Navier-Stokes system on collocated grids.
///
///   d_t rho + div(rho u)                         = g_mass
///   d_t (rho u) + div(rho u (x) u) + grad p(rho) = div S(grad u) + rho f
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "nsrel/field.hpp"
#include "nsrel/stress.hpp"
#include "nsrel/thermo.hpp"

namespace nsrel {

enum class ConvectionScheme {
  Upwind,   ///< first-order donor cell
  Central,  ///< central flux plus a scalar artificial viscosity
};

struct FluidParams {
  ViscosityParams visc;
  std::shared_ptr<const PressureLaw> law;
  double cfl = 0.4;
  ConvectionScheme scheme = ConvectionScheme::Upwind;
  /// Fraction of the upwind dissipation kept by the central scheme, in [0, 1].
  double artificial_viscosity = 0.25;

  /// Throws DomainError / StructuralError on invalid values or a missing law.
  void validate() const;
};

struct State {
  double time = 0.0;
  ScalarField rho;
  VectorField u;

  State(double t, ScalarField density, VectorField velocity);
};

/// 1/2 rho |w|^2 + bregman(rho, r): the integrand shared by the total energy
/// and the relative entropy, so both reduce to the same arithmetic.
inline double relative_energy_density(double rho, const Vec2& w, double r, const PressureLaw& law) {
  return 0.5 * rho * dot(w, w) + law.bregman(rho, r);
}

/// Source terms at one point: mass production and body acceleration f.
struct SourceTerms {
  double mass = 0.0;
  Vec2 accel{};
};

class Forcing {
public:
  using Fn = std::function<SourceTerms(double t, const Vec2& x)>;

  /// f = 0 and no mass source.
  Forcing() = default;
  explicit Forcing(Fn fn) : fn_(std::move(fn)) {}

  static Forcing body_force(std::function<Vec2(double, const Vec2&)> f);

  bool is_zero() const { return !fn_; }
  SourceTerms at(double t, const Vec2& x) const { return fn_ ? fn_(t, x) : SourceTerms{}; }
  /// Body acceleration sampled at every cell centre.
  VectorField acceleration(const Grid& grid, double t) const;

private:
  Fn fn_;
};

/// cfl * min over cells of min(h / (|u| + c_s), rho h^2 / (4 mu / 3 + eta)).
/// Cells at rest in vacuum are skipped by the viscous limit. Throws
/// TimeStepCollapseError when a cell drives dt below 1e-12 of the acoustic limit.
double stable_dt(const State& s, const FluidParams& params);

/// Reusable work buffers for step(). One integrator per trajectory.
class Integrator {
public:
  Integrator(const Grid& grid, FluidParams params, Forcing forcing);

  /// One SSP-RK2 step. Throws DivergenceError on non-finite values.
  void step(State& s, double dt);

  /// Mass removed by flooring rho at 0, accumulated over all steps.
  double clipped_mass() const { return clipped_mass_; }
  const FluidParams& params() const { return params_; }
  const Forcing& forcing() const { return forcing_; }

private:
  struct Conserved {
    std::vector<double> rho, mx, my;
  };

  void rhs(double t, const Conserved& q, Conserved& out);
  void fill_padded(const Conserved& q);
  void floor_density(Conserved& q);
  void to_state(const Conserved& q, State& s) const;
  void from_state(const State& s, Conserved& q) const;

  Grid grid_;
  FluidParams params_;
  Forcing forcing_;
  int gx_, gy_, px_, py_;
  std::vector<double> rho_p_, ux_p_, uy_p_, p_p_;
  std::vector<double> sxx_, sxy_, syx_, syy_;
  std::vector<Vec2> x_centres_;
  Conserved q0_, q1_, k_;
  double clipped_mass_ = 0.0;
};

/// Convenience wrapper around a temporary Integrator.
State step(const State& s, double dt, const FluidParams& params, const Forcing& forcing);

/// Mass integral of rho.
double total_mass(const State& s);

/// int (1/2 rho |u|^2 + H(rho) - H'(rho_bar)(rho - rho_bar) - H(rho_bar)) dx.
double total_energy(const State& s, const PressureLaw& law);

struct RunOptions {
  double t_final = 1.0;
  int save_every = 1;      ///< steps between saved states
  std::size_t max_steps = 10'000'000;
};

struct Trajectory {
  std::vector<State> states;         ///< strictly increasing times, first = initial
  std::vector<double> clipped_mass;  ///< cumulative clipped mass at each state
  std::size_t steps = 0;
};

/// Integrates to t_final, saving the initial state, every save_every-th state
/// and the final state (the last step is shortened to land on t_final).
Trajectory run(State initial, const FluidParams& params, const Forcing& forcing,
               const RunOptions& options);

}  // namespace nsrel
