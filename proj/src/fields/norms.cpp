#include "nsrel/norms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nsrel/errors.hpp"

namespace nsrel {

double integrate(const ScalarField& f) {
  return ordered_sum(f.values()) * f.grid().cell_volume();
}

double lp_norm_of_magnitudes(std::span<const double> magnitudes, double cell_volume, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : magnitudes) m = std::max(m, std::abs(x));
    return m;
  }
  CompensatedSum acc;
  if (p == 2.0) {
    for (double x : magnitudes) acc.add(x * x);
    return std::sqrt(acc.value() * cell_volume);
  }
  for (double x : magnitudes) acc.add(std::pow(std::abs(x), p));
  return std::pow(acc.value() * cell_volume, 1.0 / p);
}

double lp_norm(const ScalarField& f, double p) {
  return lp_norm_of_magnitudes(f.values(), f.grid().cell_volume(), p);
}

double lp_norm(const VectorField& v, double p) {
  std::vector<double> mag(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) mag[k] = norm(v.at(k));
  return lp_norm_of_magnitudes(mag, v.grid().cell_volume(), p);
}

double lp_norm(const TensorField& t, double p) {
  std::vector<double> mag(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Mat2 m = t.at(k);
    mag[k] = std::sqrt(contract(m, m));
  }
  return lp_norm_of_magnitudes(mag, t.grid().cell_volume(), p);
}

}  // namespace nsrel
