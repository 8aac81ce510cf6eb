/// @file test_relentropy.cpp
/// @brief Relative entropy, remainder, admissibility, Gronwall coefficient and
/// envelope, and the relative energy inequality residual.

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "nsrel/checkpoint.hpp"
#include "nsrel/errors.hpp"
#include "nsrel/korn.hpp"
#include "nsrel/relentropy.hpp"

using namespace nsrel;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

FluidParams fluid(double mu, double gamma = 2.0, double beta = 0.0) {
  FluidParams p;
  p.visc.mu = mu;
  p.visc.beta = beta;
  p.law = std::make_shared<IsentropicLaw>(1.0, gamma, 1.0);
  return p;
}

Grid box(int n, BoundaryKind x, BoundaryKind y) { return Grid::box(n, n, {0, 0}, {1, 1}, x, y); }

Grid periodic_box(int n) { return box(n, BoundaryKind::Periodic, BoundaryKind::Periodic); }

State uniform_state(const Grid& g, double rho, Vec2 u) {
  return State(0.0, ScalarField(g, rho), VectorField::sample(g, [&](const Vec2&) { return u; }));
}

State wavy_state(const Grid& g, std::uint64_t index = 0) {
  const VectorField phi = random_zero_boundary_field(g, 21, index);
  ScalarField rho = ScalarField::sample(g, [](const Vec2& x) {
    return 1.0 + 0.3 * std::sin(2 * pi * x[0]) * std::sin(2 * pi * x[1]);
  });
  VectorField u(g);
  for (std::size_t k = 0; k < g.size(); ++k) u.set(k, 0.5 * phi.at(k));
  return State(0.0, std::move(rho), std::move(u));
}

State sampled(const TestPair& pair, const Grid& g, double t) {
  return State(t, ScalarField::sample(g, [&](const Vec2& x) { return pair.density(t, x); }),
               VectorField::sample(g, [&](const Vec2& x) { return pair.velocity(t, x); }));
}

DiagnosticsRecord rec(double t, double e, double h) {
  DiagnosticsRecord r;
  r.time = t;
  r.rel_entropy = e;
  r.gronwall_h = h;
  return r;
}

}  // namespace

TEST_CASE("validate_test_pair") {
  const IsentropicLaw law(1.0, 1.6, 1.0);
  SUBCASE("equilibrium passes everywhere") {
    for (BoundaryKind k : {BoundaryKind::Periodic, BoundaryKind::NoSlip, BoundaryKind::NavierSlip}) {
      const AdmissibilityReport rep = validate_test_pair(constant_pair(2, 1.0), box(8, k, k), law, 1.0);
      CHECK(rep.ok());
      CHECK(rep.r_min == 1.0);
      CHECK(rep.checks.size() == 3);
    }
  }
  SUBCASE("vanishing density fails the lower bound") {
    const TestPair p = TestPair::from_family("touches_zero", 2, PairCompatibility::NoSlipCompatible,
                                             [](auto t, auto x, auto) {
                                               using T = decltype(t);
                                               using std::cos;
                                               return PairFields<T>{0.5 - 0.5 * cos(2 * pi * x) + 0.0 * t, {T(0.0), T(0.0)}};
                                             });
    const AdmissibilityReport rep = validate_test_pair(p, periodic_box(16), law, 1.0);
    CHECK_FALSE(rep.ok());
    CHECK(rep.failures().find("density_lower_bound") != std::string::npos);
  }
  SUBCASE("sin(pi x) sin(pi y) sigma(t) fits no-slip and slip walls") {
    const TestPair p = TestPair::from_family("bubble", 2, PairCompatibility::NoSlipCompatible,
                                             [](auto t, auto x, auto y) {
                                               using T = decltype(t);
                                               using std::sin;
                                               using std::cos;
                                               return PairFields<T>{T(1.0) + 0.0 * x, {sin(pi * x) * sin(pi * y) * cos(t), T(0.0)}};
                                             });
    CHECK(validate_test_pair(p, box(16, BoundaryKind::NoSlip, BoundaryKind::NoSlip), law, 1.0).ok());
    CHECK(validate_test_pair(p, box(16, BoundaryKind::NavierSlip, BoundaryKind::NavierSlip), law, 1.0).ok());
  }
  SUBCASE("slip-only pair fails on no-slip walls") {
    const Grid walls = box(16, BoundaryKind::Periodic, BoundaryKind::NoSlip);
    const TestPair ch = slip_channel(box(16, BoundaryKind::Periodic, BoundaryKind::NavierSlip), PairParams{},
                                     fluid(0.01).visc);
    const AdmissibilityReport rep = validate_test_pair(ch, walls, law, 1.0);
    CHECK_FALSE(rep.ok());
    CHECK(rep.failures().find("boundary_compatibility") != std::string::npos);
  }
}

TEST_CASE("relative entropy examples") {
  const Grid g = periodic_box(8);
  const IsentropicLaw law(1.0, 2.0, 1.0);
  const TestPair eq = constant_pair(2, 1.0);
  CHECK(relative_entropy(uniform_state(g, 1.0, {0, 0}), eq, law) == 0.0);
  CHECK(relative_entropy(uniform_state(g, 2.0, {0, 0}), eq, law) == doctest::Approx(1.0).epsilon(1e-14));
  for (std::uint64_t i = 0; i < 5; ++i) {
    const State s = wavy_state(g, i);
    const double e = relative_entropy(s, eq, law);
    CHECK(e == total_energy(s, law));
    CHECK(e > 0.0);
  }
  const TestPair wave = periodic_wave(g, PairParams{});
  const State on_pair = sampled(wave, g, 0.3);
  CHECK(std::abs(relative_entropy(on_pair, wave, law)) <= 1e-10);
  CHECK(relative_entropy(wavy_state(g), wave, law) > 0.0);
}

TEST_CASE("remainder examples") {
  const Grid g = periodic_box(16);
  const FluidParams p = fluid(0.05, 1.6);
  SUBCASE("against the equilibrium pair only the force term survives") {
    const Forcing f = Forcing::body_force([](double, const Vec2& x) {
      return Vec2{std::cos(2 * pi * x[1]), 0.5 * std::sin(2 * pi * x[0])};
    });
    const State s = wavy_state(g);
    const RemainderBreakdown r = remainder(s, constant_pair(2, 1.0), p, f);
    CHECK(r.convective == 0.0);
    CHECK(r.viscous == 0.0);
    CHECK(r.entropy == 0.0);
    CHECK(r.pressure == 0.0);
    CHECK(r.friction == 0.0);
    CHECK(r.total == energy_diagnostics(s, p, f).force_power);
  }
  SUBCASE("1D uniform shift: total = int rho f . (u - U)") {
    const Grid line = Grid::line(16, 0.0, 1.0, BoundaryKind::Periodic);
    const TestPair U = constant_pair(1, 1.3, {0.4, 0.0});
    const State s = uniform_state(line, 1.3, {0.4 + 0.1, 0.0});
    const Forcing f = Forcing::body_force([](double, const Vec2& x) { return Vec2{std::sin(2 * pi * x[0]) + 2.0, 0.0}; });
    const RemainderBreakdown r = remainder(s, U, fluid(0.05, 1.6), f);
    CHECK(r.total == doctest::Approx(1.3 * 2.0 * 0.1).epsilon(1e-13));
    CHECK(r.total == doctest::Approx(r.force).epsilon(1e-15));
  }
  SUBCASE("terms sum to the total") {
    const TestPair wave = periodic_wave(g, PairParams{});
    const Forcing f = mms_forcing(wave, g, p);
    for (std::uint64_t i = 0; i < 4; ++i) {
      const RemainderBreakdown r = remainder(wavy_state(g, i), wave, p, f);
      const double sum = r.convective + r.viscous + r.force + r.entropy + r.pressure + r.friction;
      const double scale = std::abs(r.convective) + std::abs(r.viscous) + std::abs(r.force) +
                           std::abs(r.entropy) + std::abs(r.pressure) + std::abs(r.friction);
      CHECK(std::abs(sum - r.total) <= 1e-12 * scale);
    }
  }
  SUBCASE("state sampled from the pair: pressure term vanishes") {
    const TestPair wave = periodic_wave(g, PairParams{});
    const RemainderBreakdown r = remainder(sampled(wave, g, 0.1), wave, p, Forcing{});
    CHECK(r.pressure == 0.0);
    CHECK(std::abs(r.convective) <= 1e-15);
  }
  SUBCASE("with U = 0 the friction term recovers beta oint |u|^2") {
    const Grid ch = box(16, BoundaryKind::Periodic, BoundaryKind::NavierSlip);
    const FluidParams fp = fluid(0.05, 1.6, 0.7);
    const State s = wavy_state(ch);
    const RelativeDiagnostics d = relative_diagnostics(s, constant_pair(2, 1.0), fp, Forcing{});
    CHECK(d.rel_friction == energy_diagnostics(s, fp, Forcing{}).friction_dissipation);
    CHECK(d.rel_friction > 0.0);
    CHECK(d.remainder.friction == 0.0);
  }
}

TEST_CASE("gronwall coefficient") {
  const Grid g = periodic_box(16);
  const FluidParams p = fluid(0.1, 1.6);
  CHECK(gronwall_h(constant_pair(2, 1.0), g, p, 0.3, 2.5) == 2.5);
  const Mat2 G{{{0.3, -0.7}, {0.2, 0.1}}};
  const TestPair lin = linear_flow(2, 1.0, G, {0.5, 0.5});
  // row-sum norm of G = max(1.0, 0.3); div S of a linear field is 0
  CHECK(gronwall_h(lin, g, p, 0.0, 1.5) == doctest::Approx(1.5 * (1.0 + 1.0)).epsilon(1e-14));
  const TestPair wave = periodic_wave(g, PairParams{});
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(k * 0.05);
  const auto h = gronwall_h(wave, g, p, times, 1.0);
  for (double v : h) {
    CHECK(std::isfinite(v));
    CHECK(v >= 1.0);
  }
  // periodic in time with period 2 pi / omega = 1
  CHECK(h.front() == doctest::Approx(h.back()).epsilon(1e-10));
}

TEST_CASE("gronwall envelope") {
  const std::vector<double> t{0.0, 0.25, 0.5, 1.0};
  for (double v : gronwall_envelope(0.0, t, std::vector<double>(4, 3.0))) CHECK(v == 0.0);
  const auto env = gronwall_envelope(1.0, t, std::vector<double>(4, 2.0));
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(env[k] == doctest::Approx(std::exp(2.0 * t[k])).epsilon(1e-14));
  CHECK_THROWS_AS(gronwall_envelope(1.0, t, std::vector<double>{1, -1, 1, 1}), DomainError);
  CHECK_THROWS_AS(gronwall_envelope(-1.0, t, std::vector<double>(4, 1.0)), DomainError);

  SUBCASE("piecewise-constant h: product of exponentials at two resolutions") {
    // h = 1 on [0, 0.4), 3 on [0.4, 1]; the jump is a repeated time sample
    auto build = [](int n) {
      std::vector<double> tt, hh;
      for (int k = 0; k <= n; ++k) {
        const double s = 0.4 * k / n;
        tt.push_back(s);
        hh.push_back(1.0);
      }
      for (int k = 0; k <= n; ++k) {
        tt.push_back(0.4 + 0.6 * k / n);
        hh.push_back(3.0);
      }
      return std::pair{tt, hh};
    };
    const auto [t1, h1] = build(10);
    const auto [t2, h2] = build(1000);
    const double exact = std::exp(0.4) * std::exp(3.0 * 0.6);
    const double e1 = gronwall_envelope(2.0, t1, h1).back();
    const double e2 = gronwall_envelope(2.0, t2, h2).back();
    CHECK(std::abs(e1 - e2) <= 1e-10 * e2);
    CHECK(e2 == doctest::Approx(2.0 * exact).epsilon(1e-12));
  }
  SUBCASE("monotone in E0 and h") {
    const std::vector<double> h{0.5, 1.0, 0.2, 0.7};
    const std::vector<double> bigger{0.6, 1.0, 0.9, 0.7};
    const auto a = gronwall_envelope(1.0, t, h);
    const auto b = gronwall_envelope(1.5, t, h);
    const auto c = gronwall_envelope(1.0, t, bigger);
    for (std::size_t k = 0; k < t.size(); ++k) {
      CHECK(b[k] >= a[k]);
      CHECK(c[k] >= a[k]);
    }
  }
}

TEST_CASE("trajectory records, residuals and reductions") {
  const Grid g = box(16, BoundaryKind::Periodic, BoundaryKind::NavierSlip);
  const FluidParams p = fluid(0.02, 1.6, 1.0);
  SUBCASE("equilibrium: every residual is exactly 0") {
    const Trajectory traj = run(uniform_state(g, 1.0, {0, 0}), p, Forcing{}, {0.1, 1});
    const auto recs = record_trajectory(traj, constant_pair(2, 1.0), p, Forcing{}, 1.0);
    for (const auto& r : recs) {
      CHECK(r.rei_residual == 0.0);
      CHECK(r.energy_residual == 0.0);
      CHECK(r.rel_entropy == 0.0);
      CHECK(r.gronwall_h == 1.0);
      CHECK(r.gronwall_env == 0.0);
    }
    const WeakStrongReport rep = weak_strong_gap(recs, 0.0);
    CHECK(rep.inequality_holds);
    CHECK(rep.max_rel_entropy == 0.0);
  }
  SUBCASE("against (rho_bar, 0) the relative residual equals the energy residual bit for bit") {
    const Forcing f = Forcing::body_force([](double t, const Vec2& x) {
      return Vec2{0.3 * std::sin(2 * pi * x[1]) * std::cos(3 * t), 0.0};
    });
    const Trajectory traj = run(wavy_state(g), p, f, {0.1, 1});
    const auto recs = record_trajectory(traj, constant_pair(2, 1.0), p, f, 1.0);
    for (const auto& r : recs) {
      CHECK(std::bit_cast<std::uint64_t>(r.rei_residual) == std::bit_cast<std::uint64_t>(r.energy_residual));
      CHECK(r.rel_entropy == r.energy);
    }
    const auto again = rei_residual(recs);
    for (std::size_t k = 0; k < recs.size(); ++k) CHECK(again[k] == recs[k].rei_residual);
  }
  SUBCASE("missing relative columns are structural errors") {
    std::vector<DiagnosticsRecord> recs(2);
    CHECK_THROWS_AS(rei_residual(recs), StructuralError);
  }
}

TEST_CASE("relative residual of a manufactured solution shrinks under refinement") {
  const FluidParams p = fluid(0.01, 1.6);
  std::vector<double> worst;
  for (int n : {16, 32}) {
    const Grid g = periodic_box(n);
    const TestPair wave = periodic_wave(g, PairParams{});
    const Forcing f = mms_forcing(wave, g, p);
    const Trajectory traj = run(sampled(wave, g, 0.0), p, f, {0.1, 1});
    const auto recs = record_trajectory(traj, wave, p, f, 1.0);
    double m = 0.0;
    for (const auto& r : recs) m = std::max(m, std::abs(r.rei_residual));
    worst.push_back(m);
  }
  CHECK(worst[0] / worst[1] >= 1.5);
}

TEST_CASE("diagnostics recomputed from a reloaded checkpoint are identical") {
  const Grid g = periodic_box(12);
  const FluidParams p = fluid(0.02, 1.6);
  const TestPair wave = periodic_wave(g, PairParams{});
  const Forcing f = mms_forcing(wave, g, p);
  State s = wavy_state(g);
  s.time = 0.2;
  const fs::path path = fs::temp_directory_path() / "nsrel_relentropy_ck.bin";
  write_checkpoint(path, s, p, "hash");
  const Checkpoint c = read_checkpoint(path);
  const RelativeDiagnostics a = relative_diagnostics(s, wave, p, f);
  const RelativeDiagnostics b = relative_diagnostics(c.state, wave, c.params, f);
  CHECK(a.rel_entropy == b.rel_entropy);
  CHECK(a.rel_dissipation == b.rel_dissipation);
  CHECK(a.remainder.total == b.remainder.total);
  fs::remove(path);
  fs::remove(fs::path(path.string() + ".txt"));
}

TEST_CASE("required gronwall constant and refinement ratios") {
  const std::vector<DiagnosticsRecord> decaying{rec(0, 1.0, 1.0), rec(0.5, 0.9, 1.0), rec(1.0, 0.5, 1.0)};
  CHECK(required_gronwall_constant(decaying) == 0.0);
  const std::vector<DiagnosticsRecord> growing{rec(0, 1.0, 2.0), rec(0.5, std::exp(0.5), 2.0), rec(1.0, std::exp(1.5), 2.0)};
  // E(t) = exp(K * 2 t) needs K = 0.5 at t = 0.5 and 0.75 at t = 1
  CHECK(required_gronwall_constant(growing) == doctest::Approx(0.75).epsilon(1e-14));
  const std::vector<DiagnosticsRecord> zero{rec(0, 0.0, 1.0), rec(1, 0.1, 1.0)};
  CHECK_THROWS_AS(required_gronwall_constant(zero), DomainError);
  const std::vector<double> v{8.0, 2.0, 1.0};
  const auto ratios = refinement_ratios(v);
  REQUIRE(ratios.size() == 2);
  CHECK(ratios[0] == 4.0);
  CHECK(ratios[1] == 2.0);
}
