#include "nsrel/field.hpp"

#include <cmath>
#include <string>

#include "nsrel/errors.hpp"

namespace nsrel {

namespace {

bool finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

ScalarField::ScalarField(Grid grid, double fill) : grid_(grid), data_(grid.size(), fill) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), data_(std::move(values)) {
  if (data_.size() != grid_.size())
    throw StructuralError("scalar field value count does not match grid cell count");
}

bool ScalarField::all_finite() const { return finite(data_); }

VectorField::VectorField(Grid grid) : grid_(grid), data_(grid.size() * grid.dim(), 0.0) {}

std::span<const double> VectorField::component(int c) const {
  return std::span<const double>(data_).subspan(c * size(), size());
}

std::span<double> VectorField::component(int c) {
  return std::span<double>(data_).subspan(c * size(), size());
}

Vec2 VectorField::at(std::size_t k) const {
  return {data_[k], grid_.dim() == 2 ? data_[size() + k] : 0.0};
}

void VectorField::set(std::size_t k, const Vec2& v) {
  data_[k] = v[0];
  if (grid_.dim() == 2) data_[size() + k] = v[1];
}

bool VectorField::all_finite() const { return finite(data_); }

TensorField::TensorField(Grid grid)
    : grid_(grid), data_(grid.size() * grid.dim() * grid.dim(), 0.0) {}

std::span<const double> TensorField::component(int a, int b) const {
  const int c = a * grid_.dim() + b;
  return std::span<const double>(data_).subspan(c * size(), size());
}

std::span<double> TensorField::component(int a, int b) {
  const int c = a * grid_.dim() + b;
  return std::span<double>(data_).subspan(c * size(), size());
}

Mat2 TensorField::at(std::size_t k) const {
  Mat2 m{};
  const int d = grid_.dim();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) m[a][b] = data_[(a * d + b) * size() + k];
  return m;
}

void TensorField::set(std::size_t k, const Mat2& m) {
  const int d = grid_.dim();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) data_[(a * d + b) * size() + k] = m[a][b];
}

bool TensorField::all_finite() const { return finite(data_); }

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

double ordered_sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double x : values) acc.add(x);
  return acc.value();
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw StructuralError(std::string(what) + ": operands live on different grids");
}

}  // namespace nsrel
