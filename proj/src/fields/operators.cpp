#include "nsrel/operators.hpp"

#include "nsrel/errors.hpp"

namespace nsrel {

void partial_derivative(const Grid& grid, std::span<const double> f, int axis,
                        std::span<double> out) {
  if (f.size() != grid.size() || out.size() != grid.size())
    throw StructuralError("partial_derivative: field size does not match grid");
  if (axis < 0 || axis >= grid.dim()) throw StructuralError("partial_derivative: bad axis");

  const int nx = grid.cells(0);
  const int ny = grid.cells(1);
  const int n = grid.cells(axis);
  const double inv2h = 0.5 / grid.spacing(axis);
  const bool periodic = grid.periodic(axis);
  const std::size_t stride = axis == 0 ? 1 : static_cast<std::size_t>(nx);
  const int lines = axis == 0 ? ny : nx;

  for (int line = 0; line < lines; ++line) {
    const std::size_t base = axis == 0 ? grid.index(0, line) : grid.index(line, 0);
    auto at = [&](int k) { return f[base + stride * static_cast<std::size_t>(k)]; };
    auto put = [&](int k, double v) { out[base + stride * static_cast<std::size_t>(k)] = v; };
    for (int k = 1; k < n - 1; ++k) put(k, (at(k + 1) - at(k - 1)) * inv2h);
    if (periodic) {
      put(0, (at(1) - at(n - 1)) * inv2h);
      put(n - 1, (at(0) - at(n - 2)) * inv2h);
    } else {
      put(0, (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv2h);
      put(n - 1, (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) * inv2h);
    }
  }
}

VectorField gradient(const ScalarField& f) {
  VectorField g(f.grid());
  for (int b = 0; b < f.grid().dim(); ++b) partial_derivative(f.grid(), f.values(), b, g.component(b));
  return g;
}

TensorField gradient(const VectorField& v) {
  TensorField g(v.grid());
  const int d = v.grid().dim();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) partial_derivative(v.grid(), v.component(a), b, g.component(a, b));
  return g;
}

ScalarField divergence(const VectorField& v) {
  const Grid& grid = v.grid();
  ScalarField div(grid);
  std::vector<double> scratch(grid.size());
  for (int a = 0; a < grid.dim(); ++a) {
    partial_derivative(grid, v.component(a), a, scratch);
    for (std::size_t k = 0; k < grid.size(); ++k) div[k] += scratch[k];
  }
  return div;
}

}  // namespace nsrel
