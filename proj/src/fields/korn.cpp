#include "nsrel/korn.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>

#include "nsrel/errors.hpp"
#include "nsrel/operators.hpp"
#include "nsrel/random.hpp"

namespace nsrel {

namespace {

double ratio_impl(const VectorField& z, const ViscosityParams& visc, const ScalarField* weight) {
  visc.validate();
  const Grid& grid = z.grid();
  const int dim = grid.dim();
  const TensorField grad = gradient(z);

  CompensatedSum value_sq, grad_sq, stress_sq, weighted;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const Vec2 v = z.at(k);
    const Mat2 g = grad.at(k);
    const Mat2 s = stress_at(g, dim, visc);
    value_sq.add(dot(v, v));
    grad_sq.add(contract(g, g));
    stress_sq.add(contract(s, s));
    if (weight) weighted.add((*weight)[k] * dot(v, v));
  }
  const double vol = grid.cell_volume();
  const double numerator = (value_sq.value() + grad_sq.value()) * vol;
  const double denominator = (stress_sq.value() + weighted.value()) * vol;
  if (!(denominator > 1e-24 * numerator) || denominator == 0.0)
    throw DegenerateFieldError("korn_ratio: stress (and weight) term vanishes for this field");
  return numerator / denominator;
}

double mode(bool periodic, int k, double xi, double phase) {
  return periodic ? std::sin(2.0 * std::numbers::pi * k * xi + phase)
                  : std::sin(std::numbers::pi * k * xi);
}

}  // namespace

double korn_ratio(const VectorField& z, const ViscosityParams& visc) {
  return ratio_impl(z, visc, nullptr);
}

double korn_ratio(const VectorField& z, const ViscosityParams& visc, const ScalarField& weight) {
  require_same_grid(z.grid(), weight.grid(), "korn_ratio");
  for (double w : weight.values())
    if (!(w >= 0.0)) throw DomainError("korn_ratio: weight must be nonnegative");
  if (!(ordered_sum(weight.values()) > 0.0))
    throw DomainError("korn_ratio: weight must have positive integral");
  return ratio_impl(z, visc, &weight);
}

VectorField random_zero_boundary_field(const Grid& grid, std::uint64_t seed, std::uint64_t index,
                                       int modes) {
  if (modes < 1) throw DomainError("random_zero_boundary_field: modes must be >= 1");
  auto rng = counter_rng(seed, index);
  const int dim = grid.dim();
  const int ly_modes = dim == 2 ? modes : 1;

  struct Term {
    int comp, k, l;
    double coeff, phase_x, phase_y;
  };
  std::vector<Term> terms;
  for (int c = 0; c < dim; ++c)
    for (int k = 1; k <= modes; ++k)
      for (int l = 1; l <= ly_modes; ++l) {
        const double scale = dim == 2 ? 1.0 / (k * k + l * l) : 1.0 / (k * k);
        Term t{c, k, l, uniform(rng, -1.0, 1.0) * scale, 0.0, 0.0};
        t.phase_x = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        t.phase_y = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        terms.push_back(t);
      }

  const bool px = grid.periodic(0);
  const bool py = grid.periodic(1);
  return VectorField::sample(grid, [&](const Vec2& x) {
    const double xi = (x[0] - grid.origin(0)) / grid.extent(0);
    const double eta = dim == 2 ? (x[1] - grid.origin(1)) / grid.extent(1) : 0.0;
    Vec2 v{0.0, 0.0};
    for (const Term& t : terms) {
      const double fy = dim == 2 ? mode(py, t.l, eta, t.phase_y) : 1.0;
      v[t.comp] += t.coeff * mode(px, t.k, xi, t.phase_x) * fy;
    }
    return v;
  });
}

KornEnsemble korn_ensemble(const Grid& grid, const ViscosityParams& visc, std::uint64_t seed,
                           int count, int modes) {
  if (count < 1) throw DomainError("korn_ensemble: count must be >= 1");
  KornEnsemble out;
  out.ratios.resize(count);
  std::vector<std::exception_ptr> failures(count);
#pragma omp parallel for schedule(static)
  for (int n = 0; n < count; ++n) {
    try {
      out.ratios[n] = korn_ratio(random_zero_boundary_field(grid, seed, n, modes), visc);
    } catch (...) {
      failures[n] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  double sup = 0.0;
  for (double r : out.ratios) {
    sup = std::max(sup, r);
    out.running_sup.push_back(sup);
  }
  out.constant = sup;
  return out;
}

}  // namespace nsrel
