#include "nsrel/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsrel/errors.hpp"

namespace nsrel {

namespace {

void require_nonnegative(double rho, const char* what) {
  if (!(rho >= 0.0)) throw DomainError(std::string(what) + ": density must be >= 0");
}

void require_positive(double rho, const char* what) {
  if (!(rho > 0.0)) throw DomainError(std::string(what) + ": density must be > 0");
}

// s^gamma - 1 - gamma (s - 1)
double convexity_gap(double s, double gamma) {
  const double x = s - 1.0;
  if (std::abs(x) > 0.5) return std::pow(s, gamma) - 1.0 - gamma * x;
  double coeff = gamma * (gamma - 1.0) / 2.0;
  double power = x * x;
  double sum = 0.0;
  for (int k = 2; k < 120; ++k) {
    const double term = coeff * power;
    sum += term;
    if (coeff == 0.0 || std::abs(term) <= 1e-18 * std::abs(sum)) break;
    coeff *= (gamma - k) / (k + 1);
    power *= x;
  }
  return sum;
}

}  // namespace

double PressureLaw::d2potential(double rho) const {
  require_positive(rho, "d2potential");
  return dpressure(rho) / rho;
}

double PressureLaw::bregman(double rho, double r) const {
  require_nonnegative(rho, "bregman");
  require_positive(r, "bregman");
  return potential(rho) - dpotential(r) * (rho - r) - potential(r);
}

double PressureLaw::reference_gap(double rho) const {
  if (rho_bar() > 0.0) return bregman(rho, rho_bar());
  require_nonnegative(rho, "reference_gap");
  return potential(rho) - potential(0.0);
}

IsentropicLaw::IsentropicLaw(double a, double gamma, double rho_bar)
    : a_(a), gamma_(gamma), rho_bar_(rho_bar) {
  if (!(a_ > 0.0) || !std::isfinite(a_)) throw DomainError("pressure coefficient a must be > 0");
  if (!(gamma_ > 1.5) || !std::isfinite(gamma_)) throw DomainError("adiabatic exponent must be > 3/2");
  if (!(rho_bar_ >= 0.0) || !std::isfinite(rho_bar_))
    throw DomainError("reference density rho_bar must be >= 0");
}

double IsentropicLaw::pressure(double rho) const {
  require_nonnegative(rho, "pressure");
  return a_ * std::pow(rho, gamma_);
}

double IsentropicLaw::dpressure(double rho) const {
  require_nonnegative(rho, "dpressure");
  return a_ * gamma_ * std::pow(rho, gamma_ - 1.0);
}

double IsentropicLaw::potential(double rho) const {
  require_nonnegative(rho, "potential");
  const double scale = a_ / (gamma_ - 1.0);
  return scale * (std::pow(rho, gamma_) - std::pow(rho_bar_, gamma_ - 1.0) * rho);
}

double IsentropicLaw::dpotential(double rho) const {
  require_positive(rho, "dpotential");
  const double scale = a_ / (gamma_ - 1.0);
  return scale * (gamma_ * std::pow(rho, gamma_ - 1.0) - std::pow(rho_bar_, gamma_ - 1.0));
}

double IsentropicLaw::d2potential(double rho) const {
  require_positive(rho, "d2potential");
  return a_ * gamma_ * std::pow(rho, gamma_ - 2.0);
}

double IsentropicLaw::bregman(double rho, double r) const {
  require_nonnegative(rho, "bregman");
  require_positive(r, "bregman");
  return a_ / (gamma_ - 1.0) * std::pow(r, gamma_) * convexity_gap(rho / r, gamma_);
}

QuadraticBound quadratic_bound_constant(double r, const PressureLaw& law, int samples) {
  require_positive(r, "quadratic_bound_constant");
  if (samples < 16) throw DomainError("quadratic_bound_constant: need at least 16 samples");
  const double gamma = law.gamma();
  QuadraticBound out;
  out.near_infimum = std::numeric_limits<double>::infinity();
  out.far_infimum = std::numeric_limits<double>::infinity();

  // Near window, endpoints included (the ratio is continuous there); the
  // removable point rho = r takes its limit H''(r)/2.
  for (int k = 0; k <= samples; ++k) {
    const double rho = 0.5 * r + 1.5 * r * k / samples;
    const double ratio =
        rho == r ? 0.5 * law.d2potential(r) : law.bregman(rho, r) / ((rho - r) * (rho - r));
    out.near_infimum = std::min(out.near_infimum, ratio);
  }
  auto far = [&](double rho) {
    out.far_infimum = std::min(out.far_infimum, law.bregman(rho, r) / (1.0 + std::pow(rho, gamma)));
  };
  far(0.0);
  // (0, r/2]: geometric towards 0 plus uniform; [2r, 100r]: geometric plus uniform.
  for (int k = 0; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    far(0.5 * r * std::pow(1e-12, 1.0 - t));
    far(0.5 * r * t);
    far(2.0 * r * std::pow(50.0, t));
    far(2.0 * r + 98.0 * r * t);
  }
  out.c = 0.99 * std::min(out.near_infimum, out.far_infimum);
  return out;
}

bool quadratic_bound_holds(double rho, double r, double c, const PressureLaw& law) {
  const double gap = law.bregman(rho, r);
  if (rho > 0.5 * r && rho < 2.0 * r) return gap >= c * (rho - r) * (rho - r);
  return gap >= c * (1.0 + std::pow(rho, law.gamma()));
}

}  // namespace nsrel
