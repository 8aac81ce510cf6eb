/// @file norms.hpp
/// @brief Cell-volume-weighted integrals and Lebesgue norms.
#pragma once

#include <limits>
#include <span>

#include "nsrel/field.hpp"

namespace nsrel {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Integral of f (sum of cell values times cell volume).
double integrate(const ScalarField& f);

/// Discrete L^p norm of pointwise magnitudes |values|, p in [1, inf].
/// Throws DomainError for p < 1 or NaN p.
double lp_norm_of_magnitudes(std::span<const double> magnitudes, double cell_volume, double p);

double lp_norm(const ScalarField& f, double p);

/// Uses the pointwise Euclidean length of the vector.
double lp_norm(const VectorField& v, double p);

/// Uses the pointwise Frobenius norm of the tensor.
double lp_norm(const TensorField& t, double p);

}  // namespace nsrel
