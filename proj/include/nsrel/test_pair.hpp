/// @file test_pair.hpp
/// @brief Smooth comparison pairs (r, U) with exact derivatives.
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "nsrel/grid.hpp"
#include "nsrel/jet.hpp"
#include "nsrel/small_vec.hpp"
#include "nsrel/stress.hpp"

namespace nsrel {

enum class PairCompatibility {
  NoSlipCompatible,  ///< U = 0 on every wall
  SlipCompatible,    ///< only U . n = 0 on walls
};

template <class T>
struct PairFields {
  T r;
  std::array<T, 2> U;
};

/// Pointwise values and derivatives of a pair at (t, x).
struct PairSample {
  double r = 0.0;
  double r_t = 0.0;
  Vec2 r_grad{};
  Vec2 U{};
  Vec2 U_t{};
  Mat2 U_grad{};        ///< U_grad[a][b] = dU_a/dx_b
  Vec2 U_laplacian{};   ///< Laplacian of each component
  Vec2 grad_div_U{};    ///< gradient of div U

  double div_U() const { return U_grad[0][0] + U_grad[1][1]; }
};

/// div S(grad U) = mu Lap U + (mu/3 + eta) grad div U, from exact second derivatives.
inline Vec2 stress_divergence(const PairSample& s, const ViscosityParams& visc) {
  const double c = visc.mu / 3.0 + visc.eta;
  return {visc.mu * s.U_laplacian[0] + c * s.grad_div_U[0],
          visc.mu * s.U_laplacian[1] + c * s.grad_div_U[1]};
}

class TestPair {
public:
  using ValueFn = std::function<PairFields<double>(double, double, double)>;
  using JetFn = std::function<PairFields<Jet>(const Jet&, const Jet&, const Jet&)>;

  TestPair(std::string name, int dim, PairCompatibility tag, ValueFn values, JetFn jets);

  /// Family is a callable templated on the scalar type:
  ///   PairFields<T> operator()(T t, T x, T y) const
  template <class Family>
  static TestPair from_family(std::string name, int dim, PairCompatibility tag, Family family) {
    return TestPair(
        std::move(name), dim, tag,
        [family](double t, double x, double y) { return family(t, x, y); },
        [family](const Jet& t, const Jet& x, const Jet& y) { return family(t, x, y); });
  }

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  PairCompatibility compatibility() const { return tag_; }

  double density(double t, const Vec2& x) const;
  Vec2 velocity(double t, const Vec2& x) const;
  PairSample sample(double t, const Vec2& x) const;

private:
  std::string name_;
  int dim_;
  PairCompatibility tag_;
  ValueFn values_;
  JetFn jets_;
};

/// Named analytic families. Coordinates are normalised to the box
/// xi = (x - origin) / extent so one family fits any grid.
struct PairParams {
  double r0 = 1.0;                  ///< mean density
  double density_amplitude = 0.1;   ///< epsilon
  double velocity_amplitude = 0.2;  ///< V
  double frequency = 6.283185307179586;  ///< omega (rad / time)
};

/// (r0, U0) constant in space and time; the equilibrium pair when U0 = 0.
TestPair constant_pair(int dim, double r0, Vec2 U0 = {0.0, 0.0});

/// Periodic grids. Compressive oscillation plus a steady cross flow; satisfies
/// the continuity equation exactly.
TestPair periodic_wave(const Grid& grid, const PairParams& p);

/// Wall-bounded boxes. U vanishes on every wall and the tangential component
/// has zero normal derivative there, so the pair fits no-slip and Navier slip
/// for any friction; satisfies the continuity equation exactly.
TestPair box_flow(const Grid& grid, const PairParams& p);

/// 2D channel, periodic in x with Navier-slip walls in y. The tangential
/// profile cos(k (eta - 1/2)) satisfies mu dU/dn + beta U = 0 on both walls
/// (k the root of k tan(k/2) = beta L_y / mu in [2 pi, 3 pi)); the density is
/// transported by the shear so continuity holds exactly.
TestPair slip_channel(const Grid& grid, const PairParams& p, const ViscosityParams& visc);

/// Channel wall wavenumber k for a given beta L_y / mu.
double slip_channel_wavenumber(double friction_number);

/// Exact unforced solution on a doubly periodic box with uniform density r0:
/// U = (A exp(-4 pi^2 mu t / (r0 L_y^2)) sin(2 pi eta), 0), A = velocity_amplitude.
TestPair decaying_shear(const Grid& grid, const PairParams& p, const ViscosityParams& visc);

/// Steady r = r0 + eps sin(2 pi xi), U = 0.
TestPair steady_density(const Grid& grid, const PairParams& p);

/// Steady uniform r0 with linear velocity U = G (x - center).
TestPair linear_flow(int dim, double r0, const Mat2& G, Vec2 center = {0.0, 0.0});

std::vector<std::string> pair_family_names();

/// Build a family by name (see pair_family_names()); throws DomainError when
/// the name is unknown.
TestPair make_named_pair(const std::string& family, const Grid& grid, const PairParams& p,
                         const ViscosityParams& visc, double rho_bar);

}  // namespace nsrel
