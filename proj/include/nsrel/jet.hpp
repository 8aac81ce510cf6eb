/// @file jet.hpp
/// @brief Second-order truncated Taylor jets in the variables (t, x, y).
///
/// Analytic test pairs are written once as templates over the scalar type;
/// evaluating them on Jet gives exact first derivatives in (t, x, y) and exact
/// second derivatives, with no finite differencing.
#pragma once

#include <array>
#include <cmath>

namespace nsrel {

struct Jet {
  enum Var : int { T = 0, X = 1, Y = 2 };

  double v = 0.0;
  std::array<double, 3> d{};  ///< dv/dt, dv/dx, dv/dy
  std::array<double, 6> h{};  ///< tt, tx, ty, xx, xy, yy

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly

  static Jet variable(double value, Var var) {
    Jet j(value);
    j.d[var] = 1.0;
    return j;
  }

  static constexpr int hidx(int i, int k) {
    // symmetric packing of the 3x3 Hessian
    constexpr int table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return table[i][k];
  }
  double second(int i, int k) const { return h[hidx(i, k)]; }
};

/// Chain rule for a scalar function with value f0, slope f1 and curvature f2 at a.v.
inline Jet chain(const Jet& a, double f0, double f1, double f2) {
  Jet r(f0);
  for (int i = 0; i < 3; ++i) r.d[i] = f1 * a.d[i];
  for (int i = 0; i < 3; ++i)
    for (int k = i; k < 3; ++k) {
      const int q = Jet::hidx(i, k);
      r.h[q] = f1 * a.h[q] + f2 * a.d[i] * a.d[k];
    }
  return r;
}

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r(a.v + b.v);
  for (int i = 0; i < 3; ++i) r.d[i] = a.d[i] + b.d[i];
  for (int q = 0; q < 6; ++q) r.h[q] = a.h[q] + b.h[q];
  return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  Jet r(a.v - b.v);
  for (int i = 0; i < 3; ++i) r.d[i] = a.d[i] - b.d[i];
  for (int q = 0; q < 6; ++q) r.h[q] = a.h[q] - b.h[q];
  return r;
}

inline Jet operator-(const Jet& a) { return Jet(0.0) - a; }

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.v * b.v);
  for (int i = 0; i < 3; ++i) r.d[i] = a.v * b.d[i] + b.v * a.d[i];
  for (int i = 0; i < 3; ++i)
    for (int k = i; k < 3; ++k) {
      const int q = Jet::hidx(i, k);
      r.h[q] = a.v * b.h[q] + b.v * a.h[q] + a.d[i] * b.d[k] + a.d[k] * b.d[i];
    }
  return r;
}

inline Jet operator*(double s, const Jet& a) {
  Jet r(s * a.v);
  for (int i = 0; i < 3; ++i) r.d[i] = s * a.d[i];
  for (int q = 0; q < 6; ++q) r.h[q] = s * a.h[q];
  return r;
}
inline Jet operator*(const Jet& a, double s) { return s * a; }

inline Jet operator+(const Jet& a, double s) {
  Jet r = a;
  r.v += s;
  return r;
}
inline Jet operator+(double s, const Jet& a) { return a + s; }
inline Jet operator-(const Jet& a, double s) { return a + (-s); }
inline Jet operator-(double s, const Jet& a) { return (-a) + s; }

inline Jet reciprocal(const Jet& a) {
  const double inv = 1.0 / a.v;
  return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
inline Jet operator/(const Jet& a, double s) { return (1.0 / s) * a; }
inline Jet operator/(double s, const Jet& a) { return s * reciprocal(a); }

inline Jet sin(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, s, c, -s);
}

inline Jet cos(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, c, -s, -c);
}

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}

inline Jet pow(const Jet& a, double p) {
  const double f0 = std::pow(a.v, p);
  const double f1 = p * std::pow(a.v, p - 1.0);
  const double f2 = p * (p - 1.0) * std::pow(a.v, p - 2.0);
  return chain(a, f0, f1, f2);
}

inline double value(double x) { return x; }
inline double value(const Jet& j) { return j.v; }

}  // namespace nsrel
