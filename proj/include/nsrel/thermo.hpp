/// @file thermo.hpp
/// @brief Barotropic pressure laws, the pressure potential H and its Bregman gap.
///
///   H(rho)  = rho * int_{rho_bar}^{rho} p(z) / z^2 dz
///   H'(r) r - H(r) = p(r)
///   bregman(rho, r) = H(rho) - H'(r) (rho - r) - H(r) >= 0
#pragma once

#include <memory>

namespace nsrel {

/// A C^2 pressure law p(rho) with p(0) = 0, p' > 0 and p'(rho) ~ a rho^(gamma-1)
/// for large rho, together with the reference (far-field) density rho_bar.
class PressureLaw {
public:
  virtual ~PressureLaw() = default;

  /// p(rho), rho >= 0.
  virtual double pressure(double rho) const = 0;
  /// p'(rho), rho >= 0.
  virtual double dpressure(double rho) const = 0;
  /// H(rho), rho >= 0 (continuous extension at 0).
  virtual double potential(double rho) const = 0;
  /// H'(rho), rho > 0.
  virtual double dpotential(double rho) const = 0;
  /// H''(rho) = p'(rho) / rho, rho > 0.
  virtual double d2potential(double rho) const;
  /// Bregman gap of H at r; rho >= 0, r > 0.
  virtual double bregman(double rho, double r) const;

  virtual double rho_bar() const = 0;
  /// gamma and a in the growth condition p'(rho) / rho^(gamma-1) -> a.
  virtual double gamma() const = 0;
  virtual double coefficient() const = 0;

  /// Energy density H(rho) - H'(rho_bar)(rho - rho_bar) - H(rho_bar), i.e.
  /// bregman(rho, rho_bar); reduces to H(rho) when rho_bar = 0.
  double reference_gap(double rho) const;
};

/// p(rho) = a rho^gamma with a > 0, gamma > 3/2, rho_bar >= 0.
class IsentropicLaw final : public PressureLaw {
public:
  /// Throws DomainError when a <= 0, gamma <= 3/2 or rho_bar < 0.
  IsentropicLaw(double a, double gamma, double rho_bar);

  double pressure(double rho) const override;
  double dpressure(double rho) const override;
  double potential(double rho) const override;
  double dpotential(double rho) const override;
  double d2potential(double rho) const override;
  /// a/(gamma-1) r^gamma phi(rho/r), phi(s) = s^gamma - 1 - gamma (s-1); the
  /// binomial series is used near s = 1 so the gap keeps full relative accuracy.
  double bregman(double rho, double r) const override;

  double rho_bar() const override { return rho_bar_; }
  double gamma() const override { return gamma_; }
  double coefficient() const override { return a_; }

private:
  double a_;
  double gamma_;
  double rho_bar_;
};

struct QuadraticBound {
  double c = 0.0;              ///< 0.99 * min(near_infimum, far_infimum)
  double near_infimum = 0.0;   ///< inf of bregman / (rho - r)^2 on r/2 < rho < 2r
  double far_infimum = 0.0;    ///< inf of bregman / (1 + rho^gamma) elsewhere on (0, 100 r]
};

/// Empirical constant of the two-branch lower bound
///   bregman(rho, r) >= c (rho - r)^2        for r/2 < rho < 2r,
///   bregman(rho, r) >= c (1 + rho^gamma)    otherwise,
/// from dense sampling of rho over (0, 100 r]. Throws DomainError for r <= 0.
QuadraticBound quadratic_bound_constant(double r, const PressureLaw& law, int samples = 20000);

/// Whether the bound with constant c holds at the single point rho.
bool quadratic_bound_holds(double rho, double r, double c, const PressureLaw& law);

}  // namespace nsrel
