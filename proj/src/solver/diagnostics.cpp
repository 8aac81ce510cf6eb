#include "nsrel/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsrel/errors.hpp"
#include "nsrel/operators.hpp"

namespace nsrel {

double friction_pairing(const VectorField& v, const VectorField& w, double beta) {
  require_same_grid(v.grid(), w.grid(), "friction_pairing");
  const Grid& g = v.grid();
  if (g.dim() != 2 || beta == 0.0) return 0.0;
  const int nx = g.cells(0), ny = g.cells(1);
  CompensatedSum sum;
  // trace of component c at the wall cell a, next cell b
  auto trace = [](const VectorField& f, int c, std::size_t a, std::size_t b) {
    return 0.5 * (3.0 * f.component(c)[a] - f.component(c)[b]);
  };
  for (int side = 0; side < 4; ++side) {
    if (g.boundary(static_cast<Side>(side)) != BoundaryKind::NavierSlip) continue;
    const bool x_wall = side < 2;
    const bool low = side % 2 == 0;
    const int tangential = x_wall ? 1 : 0;
    const int count = x_wall ? ny : nx;
    const double length = x_wall ? g.spacing(1) : g.spacing(0);
    for (int c = 0; c < count; ++c) {
      std::size_t a, b;
      if (x_wall) {
        a = g.index(low ? 0 : nx - 1, c);
        b = g.index(low ? 1 : nx - 2, c);
      } else {
        a = g.index(c, low ? 0 : ny - 1);
        b = g.index(c, low ? 1 : ny - 2);
      }
      sum.add(trace(v, tangential, a, b) * trace(w, tangential, a, b) * length);
    }
  }
  return beta * sum.value();
}

DiagnosticsRecord energy_diagnostics(const State& s, const FluidParams& params,
                                     const Forcing& forcing) {
  return energy_diagnostics(s, params, forcing.acceleration(s.rho.grid(), s.time));
}

DiagnosticsRecord energy_diagnostics(const State& s, const FluidParams& params,
                                     const VectorField& f) {
  const Grid& g = s.rho.grid();
  require_same_grid(g, f.grid(), "energy_diagnostics");
  DiagnosticsRecord rec;
  rec.time = s.time;
  rec.mass = total_mass(s);
  rec.energy = total_energy(s, *params.law);
  const TensorField gu = gradient(s.u);
  rec.dissipation = dissipation_pairing(gu, gu, params.visc);
  rec.friction_dissipation = friction_pairing(s.u, s.u, params.visc.beta);

  std::vector<double> power(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec2 w = s.u.at(k);
    power[k] = s.rho[k] * dot(f.at(k), w);
  }
  rec.force_power = ordered_sum(power) * g.cell_volume();
  return rec;
}

std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> values) {
  if (t.size() != values.size()) throw StructuralError("cumulative_trapezoid: length mismatch");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (values[k - 1] + values[k]);
  return out;
}

std::vector<double> budget_residual(std::span<const double> t, std::span<const double> level,
                                    std::span<const double> dissipation,
                                    std::span<const double> friction,
                                    std::span<const double> source) {
  const std::size_t n = t.size();
  if (level.size() != n || dissipation.size() != n || friction.size() != n || source.size() != n)
    throw StructuralError("budget_residual: column length mismatch");
  if (n == 0) throw StructuralError("budget_residual: empty series");
  for (std::size_t k = 1; k < n; ++k)
    if (!(t[k] > t[k - 1])) throw StructuralError("budget_residual: times must increase strictly");
  const auto id = cumulative_trapezoid(t, dissipation);
  const auto ib = cumulative_trapezoid(t, friction);
  const auto is = cumulative_trapezoid(t, source);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = level[k] + id[k] + ib[k] - level[0] - is[k];
  return out;
}

std::vector<double> energy_budget_residual(std::span<const DiagnosticsRecord> records) {
  const std::size_t n = records.size();
  std::vector<double> t(n), e(n), d(n), b(n), p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& r = records[k];
    for (double v : {r.time, r.energy, r.dissipation, r.friction_dissipation, r.force_power})
      if (std::isnan(v)) throw StructuralError("energy_budget_residual: record lacks energy columns");
    t[k] = r.time;
    e[k] = r.energy;
    d[k] = r.dissipation;
    b[k] = r.friction_dissipation;
    p[k] = r.force_power;
  }
  return budget_residual(t, e, d, b, p);
}

void require_boundary_compatible(const TestPair& pair, const Grid& grid, double t) {
  if (pair.dim() != grid.dim()) throw AdmissibilityError("test pair dimension differs from the grid");
  bool has_no_slip = false;
  for (int side = 0; side < 4; ++side)
    has_no_slip |= grid.boundary(static_cast<Side>(side)) == BoundaryKind::NoSlip;
  if (has_no_slip && pair.compatibility() != PairCompatibility::NoSlipCompatible)
    throw AdmissibilityError("test pair '" + pair.name() + "' is not compatible with no-slip walls");

  const int axes = grid.dim();
  for (int axis = 0; axis < axes; ++axis) {
    const int other = 1 - axis;
    const double lo = grid.origin(axis), hi = lo + grid.extent(axis);
    const int count = grid.dim() == 2 ? grid.cells(other) : 1;
    for (int c = 0; c < count; ++c) {
      Vec2 a{}, b{};
      a[axis] = lo;
      b[axis] = hi;
      if (grid.dim() == 2) a[other] = b[other] = grid.center(axis == 0 ? 0 : c, axis == 0 ? c : 0)[other];
      const Vec2 ua = pair.velocity(t, a), ub = pair.velocity(t, b);
      const double scale = 1.0 + std::max(norm(ua), norm(ub));
      const double tol = 1e-10 * scale;
      if (grid.periodic(axis)) {
        const double ra = pair.density(t, a), rb = pair.density(t, b);
        if (std::abs(ra - rb) > 1e-10 * (1.0 + std::abs(ra)) || norm(ua - ub) > tol)
          throw AdmissibilityError("test pair '" + pair.name() + "' is not periodic along axis " +
                                   std::to_string(axis));
        continue;
      }
      for (int side = 0; side < 2; ++side) {
        const Vec2& u = side == 0 ? ua : ub;
        const BoundaryKind kind = grid.boundary(static_cast<Side>(2 * axis + side));
        const double bad = kind == BoundaryKind::NoSlip ? norm(u) : std::abs(u[axis]);
        if (bad > tol) {
          std::ostringstream msg;
          msg << "test pair '" << pair.name() << "' violates the " << to_string(kind)
              << " condition on axis " << axis << " at t = " << t;
          throw AdmissibilityError(msg.str());
        }
      }
    }
  }
}

MmsSources mms_sources(const PairSample& s, int dim, const FluidParams& params) {
  const double div_u = s.div_U();
  const double u_grad_r = dot(s.U, s.r_grad);
  MmsSources out;
  out.mass = s.r_t + u_grad_r + s.r * div_u;
  const Vec2 conv = apply(s.U_grad, s.U);
  const Vec2 div_s = stress_divergence(s, params.visc);
  const double dp = params.law->dpressure(s.r);
  for (int a = 0; a < dim; ++a)
    out.momentum[a] = s.r_t * s.U[a] + s.r * s.U_t[a] + s.U[a] * (u_grad_r + s.r * div_u) +
                      s.r * conv[a] + dp * s.r_grad[a] - div_s[a];
  return out;
}

Forcing mms_forcing(const TestPair& pair, const Grid& grid, const FluidParams& params) {
  params.validate();
  require_boundary_compatible(pair, grid, 0.0);
  const int dim = grid.dim();
  return Forcing([pair, params, dim](double t, const Vec2& x) {
    const PairSample s = pair.sample(t, x);
    const MmsSources g = mms_sources(s, dim, params);
    return SourceTerms{g.mass, {g.momentum[0] / s.r, g.momentum[1] / s.r}};
  });
}

}  // namespace nsrel
