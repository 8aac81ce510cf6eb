/// @file field.hpp
/// @brief Cell-centred scalar, vector and tensor fields on a Grid.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nsrel/grid.hpp"
#include "nsrel/small_vec.hpp"

namespace nsrel {

class ScalarField {
public:
  explicit ScalarField(Grid grid, double fill = 0.0);
  /// Throws StructuralError unless values.size() == grid.size().
  ScalarField(Grid grid, std::vector<double> values);

  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    ScalarField out(grid);
    for (int j = 0; j < grid.cells(1); ++j)
      for (int i = 0; i < grid.cells(0); ++i) out.data_[grid.index(i, j)] = f(grid.center(i, j));
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }
  double operator[](std::size_t k) const { return data_[k]; }
  double& operator[](std::size_t k) { return data_[k]; }

  bool all_finite() const;

private:
  Grid grid_;
  std::vector<double> data_;
};

/// dim components stored component-major.
class VectorField {
public:
  explicit VectorField(Grid grid);

  /// f(x) -> Vec2; the second component is ignored on 1D grids.
  template <class F>
  static VectorField sample(const Grid& grid, F&& f) {
    VectorField out(grid);
    for (int j = 0; j < grid.cells(1); ++j)
      for (int i = 0; i < grid.cells(0); ++i) out.set(grid.index(i, j), f(grid.center(i, j)));
    return out;
  }

  const Grid& grid() const { return grid_; }
  int components() const { return grid_.dim(); }
  std::size_t size() const { return grid_.size(); }
  std::span<const double> component(int c) const;
  std::span<double> component(int c);
  Vec2 at(std::size_t k) const;
  void set(std::size_t k, const Vec2& v);

  bool all_finite() const;

private:
  Grid grid_;
  std::vector<double> data_;
};

/// dim x dim components; component(a, b) is the (a, b) entry.
class TensorField {
public:
  explicit TensorField(Grid grid);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }
  std::span<const double> component(int a, int b) const;
  std::span<double> component(int a, int b);
  Mat2 at(std::size_t k) const;
  void set(std::size_t k, const Mat2& m);

  bool all_finite() const;

private:
  Grid grid_;
  std::vector<double> data_;
};

/// Compensated (Neumaier) summation in index order. The result depends only on
/// the sequence, never on how callers may have produced it in parallel.
double ordered_sum(std::span<const double> values);

/// Running compensated accumulator with the same arithmetic as ordered_sum.
class CompensatedSum {
public:
  void add(double x);
  double value() const { return sum_ + carry_; }

private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Throws StructuralError unless the two grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace nsrel
