/// @file grid.hpp
/// @brief Structured cell-centred grids in one or two dimensions.
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>

#include "nsrel/small_vec.hpp"

namespace nsrel {

enum class BoundaryKind { NoSlip, NavierSlip, Periodic };

enum class Side : int { XLo = 0, XHi = 1, YLo = 2, YHi = 3 };

std::string to_string(BoundaryKind kind);
BoundaryKind boundary_kind_from_string(const std::string& name);

/// Uniform rectangular grid. Values live at cell centres
///   x_i = origin + (i + 1/2) * spacing.
/// One-dimensional grids carry a single transverse cell of unit width so that
/// cell volumes and boundary "areas" stay meaningful.
class Grid {
public:
  /// Throws DomainError / StructuralError when an invariant is violated:
  /// dim in {1,2}, >= 4 cells and positive spacing per active axis, periodic
  /// sides paired.
  Grid(int dim, std::array<int, 2> cells, std::array<double, 2> spacing,
       std::array<double, 2> origin, std::array<BoundaryKind, 4> boundary);

  static Grid line(int n, double x_lo, double x_hi, BoundaryKind kind);
  static Grid box(int nx, int ny, Vec2 lo, Vec2 hi, BoundaryKind x_kind, BoundaryKind y_kind);

  int dim() const { return dim_; }
  int cells(int axis) const { return cells_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  double origin(int axis) const { return origin_[axis]; }
  double extent(int axis) const { return spacing_[axis] * cells_[axis]; }
  BoundaryKind boundary(Side side) const { return boundary_[static_cast<int>(side)]; }
  bool periodic(int axis) const { return boundary_[2 * axis] == BoundaryKind::Periodic; }

  std::size_t size() const { return static_cast<std::size_t>(cells_[0]) * cells_[1]; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(cells_[0]) * j;
  }
  Vec2 center(int i, int j) const {
    return {origin_[0] + (i + 0.5) * spacing_[0],
            dim_ == 2 ? origin_[1] + (j + 0.5) * spacing_[1] : 0.0};
  }
  double cell_volume() const { return spacing_[0] * (dim_ == 2 ? spacing_[1] : 1.0); }
  double measure() const { return cell_volume() * static_cast<double>(size()); }
  double min_spacing() const {
    return dim_ == 2 ? std::min(spacing_[0], spacing_[1]) : spacing_[0];
  }

  bool operator==(const Grid&) const = default;

private:
  int dim_;
  std::array<int, 2> cells_;
  std::array<double, 2> spacing_;
  std::array<double, 2> origin_;
  std::array<BoundaryKind, 4> boundary_;
};

}  // namespace nsrel
