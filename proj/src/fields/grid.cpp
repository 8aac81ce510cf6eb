#include "nsrel/grid.hpp"

#include <cmath>

#include "nsrel/errors.hpp"

namespace nsrel {

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::NoSlip: return "no_slip";
    case BoundaryKind::NavierSlip: return "navier_slip";
    case BoundaryKind::Periodic: return "periodic";
  }
  return "unknown";
}

BoundaryKind boundary_kind_from_string(const std::string& name) {
  if (name == "no_slip") return BoundaryKind::NoSlip;
  if (name == "navier_slip") return BoundaryKind::NavierSlip;
  if (name == "periodic") return BoundaryKind::Periodic;
  throw DomainError("unknown boundary kind '" + name + "'");
}

Grid::Grid(int dim, std::array<int, 2> cells, std::array<double, 2> spacing,
           std::array<double, 2> origin, std::array<BoundaryKind, 4> boundary)
    : dim_(dim), cells_(cells), spacing_(spacing), origin_(origin), boundary_(boundary) {
  if (dim_ != 1 && dim_ != 2) throw StructuralError("grid dimension must be 1 or 2");
  if (dim_ == 1) {
    cells_[1] = 1;
    spacing_[1] = 1.0;
    origin_[1] = 0.0;
    boundary_[2] = boundary_[3] = BoundaryKind::Periodic;
  }
  for (int axis = 0; axis < dim_; ++axis) {
    if (cells_[axis] < 4) throw DomainError("grid needs at least 4 cells per axis");
    if (!(spacing_[axis] > 0.0) || !std::isfinite(spacing_[axis]))
      throw DomainError("grid spacing must be positive and finite");
    if (!std::isfinite(origin_[axis])) throw DomainError("grid origin must be finite");
    const bool lo = boundary_[2 * axis] == BoundaryKind::Periodic;
    const bool hi = boundary_[2 * axis + 1] == BoundaryKind::Periodic;
    if (lo != hi) throw StructuralError("periodic sides must come in opposing pairs");
  }
}

Grid Grid::line(int n, double x_lo, double x_hi, BoundaryKind kind) {
  return Grid(1, {n, 1}, {(x_hi - x_lo) / n, 1.0}, {x_lo, 0.0},
              {kind, kind, BoundaryKind::Periodic, BoundaryKind::Periodic});
}

Grid Grid::box(int nx, int ny, Vec2 lo, Vec2 hi, BoundaryKind x_kind, BoundaryKind y_kind) {
  return Grid(2, {nx, ny}, {(hi[0] - lo[0]) / nx, (hi[1] - lo[1]) / ny}, lo,
              {x_kind, x_kind, y_kind, y_kind});
}

}  // namespace nsrel
