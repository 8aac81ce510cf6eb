#include "nsrel/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsrel/errors.hpp"

namespace nsrel {

void FluidParams::validate() const {
  visc.validate();
  if (!law) throw StructuralError("fluid parameters carry no pressure law");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw DomainError("cfl safety factor must lie in (0, 1]");
  if (!(artificial_viscosity >= 0.0 && artificial_viscosity <= 1.0))
    throw DomainError("artificial viscosity fraction must lie in [0, 1]");
}

State::State(double t, ScalarField density, VectorField velocity)
    : time(t), rho(std::move(density)), u(std::move(velocity)) {
  require_same_grid(rho.grid(), u.grid(), "State");
}

Forcing Forcing::body_force(std::function<Vec2(double, const Vec2&)> f) {
  return Forcing([f = std::move(f)](double t, const Vec2& x) { return SourceTerms{0.0, f(t, x)}; });
}

VectorField Forcing::acceleration(const Grid& grid, double t) const {
  VectorField out(grid);
  if (!fn_) return out;
  const auto n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    const int i = static_cast<int>(k % grid.cells(0));
    const int j = static_cast<int>(k / grid.cells(0));
    out.set(static_cast<std::size_t>(k), fn_(t, grid.center(i, j)).accel);
  }
  return out;
}

double stable_dt(const State& s, const FluidParams& params) {
  params.validate();
  const Grid& g = s.rho.grid();
  const double h = g.min_spacing();
  const double visc_coeff = 4.0 * params.visc.mu / 3.0 + params.visc.eta;
  double acoustic = std::numeric_limits<double>::infinity();
  double best = acoustic;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double rho = s.rho[k];
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("stable_dt: invalid density");
    const double speed = norm(s.u.at(k));
    const double cs = std::sqrt(params.law->dpressure(rho));
    const double da = h / (speed + cs);
    acoustic = std::min(acoustic, da);
    double dk = da;
    if (rho > 0.0 || speed > 0.0) dk = std::min(dk, rho * h * h / visc_coeff);
    if (dk < best) {
      best = dk;
      worst = k;
    }
  }
  if (std::isinf(best)) throw DomainError("stable_dt: vacuum at rest admits no finite time step");
  if (!(best > 1e-12 * acoustic)) {
    std::ostringstream msg;
    msg << "time step collapsed at cell " << worst << " (rho = " << s.rho[worst] << ")";
    throw TimeStepCollapseError(msg.str(), worst);
  }
  return params.cfl * best;
}

Integrator::Integrator(const Grid& grid, FluidParams params, Forcing forcing)
    : grid_(grid), params_(std::move(params)), forcing_(std::move(forcing)) {
  params_.validate();
  gx_ = 2;
  gy_ = grid_.dim() == 2 ? 2 : 0;
  px_ = grid_.cells(0) + 2 * gx_;
  py_ = grid_.cells(1) + 2 * gy_;
  const auto np = static_cast<std::size_t>(px_) * py_;
  for (auto* v : {&rho_p_, &ux_p_, &uy_p_, &p_p_, &sxx_, &sxy_, &syx_, &syy_}) v->assign(np, 0.0);
  x_centres_.resize(grid_.size());
  for (int j = 0; j < grid_.cells(1); ++j)
    for (int i = 0; i < grid_.cells(0); ++i) x_centres_[grid_.index(i, j)] = grid_.center(i, j);
  for (auto* q : {&q0_, &q1_, &k_}) {
    q->rho.assign(grid_.size(), 0.0);
    q->mx.assign(grid_.size(), 0.0);
    q->my.assign(grid_.size(), 0.0);
  }
}

void Integrator::from_state(const State& s, Conserved& q) const {
  require_same_grid(grid_, s.rho.grid(), "Integrator");
  const bool two_d = grid_.dim() == 2;
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    const Vec2 u = s.u.at(k);
    q.rho[k] = s.rho[k];
    q.mx[k] = s.rho[k] * u[0];
    q.my[k] = two_d ? s.rho[k] * u[1] : 0.0;
  }
}

void Integrator::to_state(const Conserved& q, State& s) const {
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    const double rho = q.rho[k];
    s.rho[k] = rho;
    s.u.set(k, rho > 0.0 ? Vec2{q.mx[k] / rho, q.my[k] / rho} : Vec2{0.0, 0.0});
  }
}

void Integrator::fill_padded(const Conserved& q) {
  const int nx = grid_.cells(0), ny = grid_.cells(1);
  auto P = [&](int i, int j) { return static_cast<std::size_t>(i + gx_) + static_cast<std::size_t>(px_) * (j + gy_); };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = grid_.index(i, j), p = P(i, j);
      const double rho = q.rho[k];
      rho_p_[p] = rho;
      ux_p_[p] = rho > 0.0 ? q.mx[k] / rho : 0.0;
      uy_p_[p] = rho > 0.0 ? q.my[k] / rho : 0.0;
    }

  const double mu = params_.visc.mu, beta = params_.visc.beta;
  // ghost value factor for the tangential component at a Navier-slip wall
  auto slip_factor = [&](int k, double h) {
    const double d = (2 * k + 1) * h;
    return (2.0 * mu - beta * d) / (2.0 * mu + beta * d);
  };
  auto wall_density = [](double r0, double r1, int k) {
    const double v = r0 + (k + 1) * (r0 - r1);
    return v > 0.0 ? v : r0;
  };

  // axis: 0 fills x ghosts on rows [jlo, jhi), 1 fills y ghosts on columns [ilo, ihi)
  auto fill_axis = [&](int axis, int lo, int hi) {
    const int n = axis == 0 ? nx : ny;
    const int gc = axis == 0 ? gx_ : gy_;
    const double h = grid_.spacing(axis);
    auto at = [&](int along, int across) { return axis == 0 ? P(along, across) : P(across, along); };
    auto& un = axis == 0 ? ux_p_ : uy_p_;
    auto& ut = axis == 0 ? uy_p_ : ux_p_;
    for (int side = 0; side < 2; ++side) {
      const BoundaryKind kind = grid_.boundary(static_cast<Side>(2 * axis + side));
      for (int c = lo; c < hi; ++c)
        for (int k = 0; k < gc; ++k) {
          const int ghost = side == 0 ? -1 - k : n + k;
          const int src = side == 0 ? k : n - 1 - k;
          const std::size_t gp = at(ghost, c), sp = at(src, c);
          if (kind == BoundaryKind::Periodic) {
            const std::size_t wp = at(side == 0 ? n - 1 - k : k, c);
            rho_p_[gp] = rho_p_[wp];
            un[gp] = un[wp];
            ut[gp] = ut[wp];
            continue;
          }
          const std::size_t s0 = at(side == 0 ? 0 : n - 1, c), s1 = at(side == 0 ? 1 : n - 2, c);
          rho_p_[gp] = wall_density(rho_p_[s0], rho_p_[s1], k);
          un[gp] = -un[sp];
          ut[gp] = kind == BoundaryKind::NoSlip ? -ut[sp] : slip_factor(k, h) * ut[sp];
        }
    }
  };

  if (grid_.dim() == 2) fill_axis(1, 0, nx);
  // x ghosts over every padded row so corners compose both reflections
  fill_axis(0, -gy_, ny + gy_);

  const auto np = static_cast<long>(rho_p_.size());
  const PressureLaw& law = *params_.law;
#pragma omp parallel for schedule(static)
  for (long p = 0; p < np; ++p) p_p_[p] = law.pressure(rho_p_[p]);
}

void Integrator::rhs(double t, const Conserved& q, Conserved& out) {
  fill_padded(q);
  const int nx = grid_.cells(0), ny = grid_.cells(1);
  const bool two_d = grid_.dim() == 2;
  const double hx = grid_.spacing(0), hy = grid_.spacing(1);
  const long sx = 1, sy = px_;
  const double c_diss =
      params_.scheme == ConvectionScheme::Upwind ? 1.0 : params_.artificial_viscosity;
  const ViscosityParams visc = params_.visc;
  auto P = [&](int i, int j) { return static_cast<long>(i + gx_) + static_cast<long>(px_) * (j + gy_); };

  // Stress on the interior plus one ghost ring.
  {
    const int jlo = two_d ? -1 : 0, jhi = two_d ? ny + 1 : ny;
    const long rows = jhi - jlo, cols = nx + 2;
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows * cols; ++r) {
      const int i = static_cast<int>(r % cols) - 1;
      const int j = static_cast<int>(r / cols) + jlo;
      const long p = P(i, j);
      Mat2 g{};
      g[0][0] = (ux_p_[p + sx] - ux_p_[p - sx]) / (2.0 * hx);
      g[1][0] = (uy_p_[p + sx] - uy_p_[p - sx]) / (2.0 * hx);
      if (two_d) {
        g[0][1] = (ux_p_[p + sy] - ux_p_[p - sy]) / (2.0 * hy);
        g[1][1] = (uy_p_[p + sy] - uy_p_[p - sy]) / (2.0 * hy);
      }
      const Mat2 s = stress_at(g, grid_.dim(), visc);
      sxx_[p] = s[0][0];
      sxy_[p] = s[0][1];
      syx_[p] = s[1][0];
      syy_[p] = s[1][1];
    }
  }

  // Blended upwind/central face flux of the density-weighted quantity.
  auto face_flux = [c_diss](double un, double ql, double qr) {
    return un * 0.5 * (ql + qr) - 0.5 * c_diss * std::abs(un) * (qr - ql);
  };

  const long n = static_cast<long>(grid_.size());
  const double* rp = rho_p_.data();
  const double* uxp = ux_p_.data();
  const double* uyp = uy_p_.data();
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    const int i = static_cast<int>(k % nx);
    const int j = static_cast<int>(k / nx);
    const long p = P(i, j);

    double drho = 0.0, dmx = 0.0, dmy = 0.0;
    auto add_faces = [&](long stride, const double* un_p, double h) {
      const long pl = p - stride, pr = p + stride;
      const double u_lo = 0.5 * (un_p[pl] + un_p[p]);
      const double u_hi = 0.5 * (un_p[p] + un_p[pr]);
      drho -= (face_flux(u_hi, rp[p], rp[pr]) - face_flux(u_lo, rp[pl], rp[p])) / h;
      dmx -= (face_flux(u_hi, rp[p] * uxp[p], rp[pr] * uxp[pr]) -
              face_flux(u_lo, rp[pl] * uxp[pl], rp[p] * uxp[p])) / h;
      dmy -= (face_flux(u_hi, rp[p] * uyp[p], rp[pr] * uyp[pr]) -
              face_flux(u_lo, rp[pl] * uyp[pl], rp[p] * uyp[p])) / h;
    };
    add_faces(sx, uxp, hx);
    dmx -= (p_p_[p + sx] - p_p_[p - sx]) / (2.0 * hx);
    dmx += (sxx_[p + sx] - sxx_[p - sx]) / (2.0 * hx);
    dmy += (syx_[p + sx] - syx_[p - sx]) / (2.0 * hx);
    if (two_d) {
      add_faces(sy, uyp, hy);
      dmy -= (p_p_[p + sy] - p_p_[p - sy]) / (2.0 * hy);
      dmx += (sxy_[p + sy] - sxy_[p - sy]) / (2.0 * hy);
      dmy += (syy_[p + sy] - syy_[p - sy]) / (2.0 * hy);
    } else {
      dmy = 0.0;
    }

    if (!forcing_.is_zero()) {
      const SourceTerms src = forcing_.at(t, x_centres_[k]);
      drho += src.mass;
      dmx += q.rho[k] * src.accel[0];
      if (two_d) dmy += q.rho[k] * src.accel[1];
    }
    out.rho[k] = drho;
    out.mx[k] = dmx;
    out.my[k] = dmy;
  }
}

void Integrator::floor_density(Conserved& q) {
  const double vol = grid_.cell_volume();
  for (std::size_t k = 0; k < q.rho.size(); ++k) {
    if (q.rho[k] < 0.0) {
      clipped_mass_ += -q.rho[k] * vol;
      q.rho[k] = 0.0;
    }
    if (q.rho[k] == 0.0) {
      q.mx[k] = 0.0;
      q.my[k] = 0.0;
    }
  }
}

namespace {

void require_finite(const std::vector<double>& v, double t) {
  for (double x : v)
    if (!std::isfinite(x)) {
      std::ostringstream msg;
      msg << "non-finite value in solver state at t = " << t;
      throw DivergenceError(msg.str(), t);
    }
}

}  // namespace

void Integrator::step(State& s, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("step: dt must be positive and finite");
  const double t = s.time;
  const std::size_t n = grid_.size();
  from_state(s, q0_);

  rhs(t, q0_, k_);
  for (std::size_t k = 0; k < n; ++k) {
    q1_.rho[k] = q0_.rho[k] + dt * k_.rho[k];
    q1_.mx[k] = q0_.mx[k] + dt * k_.mx[k];
    q1_.my[k] = q0_.my[k] + dt * k_.my[k];
  }
  for (const auto* v : {&q1_.rho, &q1_.mx, &q1_.my}) require_finite(*v, t + dt);
  floor_density(q1_);

  rhs(t + dt, q1_, k_);
  for (std::size_t k = 0; k < n; ++k) {
    q1_.rho[k] = 0.5 * q0_.rho[k] + 0.5 * (q1_.rho[k] + dt * k_.rho[k]);
    q1_.mx[k] = 0.5 * q0_.mx[k] + 0.5 * (q1_.mx[k] + dt * k_.mx[k]);
    q1_.my[k] = 0.5 * q0_.my[k] + 0.5 * (q1_.my[k] + dt * k_.my[k]);
  }
  for (const auto* v : {&q1_.rho, &q1_.mx, &q1_.my}) require_finite(*v, t + dt);
  floor_density(q1_);

  to_state(q1_, s);
  s.time = t + dt;
}

State step(const State& s, double dt, const FluidParams& params, const Forcing& forcing) {
  Integrator integrator(s.rho.grid(), params, forcing);
  State out = s;
  integrator.step(out, dt);
  return out;
}

double total_mass(const State& s) {
  return ordered_sum(s.rho.values()) * s.rho.grid().cell_volume();
}

double total_energy(const State& s, const PressureLaw& law) {
  const Grid& g = s.rho.grid();
  std::vector<double> density(g.size());
  const double rho_bar = law.rho_bar();
#pragma omp parallel for schedule(static)
  for (long k = 0; k < static_cast<long>(g.size()); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const Vec2 u = s.u.at(kk);
    density[kk] = rho_bar > 0.0 ? relative_energy_density(s.rho[kk], u, rho_bar, law)
                                : 0.5 * s.rho[kk] * dot(u, u) + law.reference_gap(s.rho[kk]);
  }
  return ordered_sum(density) * g.cell_volume();
}

Trajectory run(State initial, const FluidParams& params, const Forcing& forcing,
               const RunOptions& options) {
  if (!(options.t_final > initial.time)) throw DomainError("run: t_final must exceed the start time");
  if (options.save_every < 1) throw DomainError("run: save_every must be >= 1");
  Integrator integrator(initial.rho.grid(), params, forcing);
  Trajectory traj;
  traj.states.push_back(initial);
  traj.clipped_mass.push_back(0.0);

  State s = std::move(initial);
  const double t_end = options.t_final;
  while (s.time < t_end) {
    if (traj.steps >= options.max_steps) throw DivergenceError("run: step limit reached", s.time);
    double dt = stable_dt(s, params);
    const bool last = s.time + dt >= t_end * (1.0 - 1e-14);
    if (last) dt = t_end - s.time;
    integrator.step(s, dt);
    if (last) s.time = t_end;
    ++traj.steps;
    if (last || traj.steps % static_cast<std::size_t>(options.save_every) == 0) {
      traj.states.push_back(s);
      traj.clipped_mass.push_back(integrator.clipped_mass());
    }
  }
  return traj;
}

}  // namespace nsrel
