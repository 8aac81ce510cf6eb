/// @file small_vec.hpp
/// @brief Fixed 2-component vectors and 2x2 matrices used for pointwise algebra.
///
/// One-dimensional problems use only the first component / the (0,0) entry;
/// the unused slots are kept at zero.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace nsrel {

using Vec2 = std::array<double, 2>;
/// Row index is the vector component, column index the derivative direction:
/// grad(v)(a, b) = d v_a / d x_b.
using Mat2 = std::array<std::array<double, 2>, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {{{a[0][0] - b[0][0], a[0][1] - b[0][1]}, {a[1][0] - b[1][0], a[1][1] - b[1][1]}}};
}

/// A : B = sum_ab A_ab B_ab
inline double contract(const Mat2& a, const Mat2& b) {
  return a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1];
}

/// (M v)_a = sum_b M_ab v_b
inline Vec2 apply(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

inline double norm(const Vec2& v) { return std::sqrt(dot(v, v)); }

/// Induced infinity norm (max absolute row sum).
inline double inf_norm(const Mat2& m) {
  return std::max(std::abs(m[0][0]) + std::abs(m[0][1]), std::abs(m[1][0]) + std::abs(m[1][1]));
}

}  // namespace nsrel
