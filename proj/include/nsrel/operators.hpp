/// @file operators.hpp
/// @brief Discrete differential operators on cell-centred fields.
///
/// Interior cells use the second-order central difference. Along a periodic
/// axis the stencil wraps around; along a wall-bounded axis the first and last
/// cells use the second-order one-sided formula
///   f'(x_0) ~ (-3 f_0 + 4 f_1 - f_2) / (2h).
/// Both are exact on affine fields, so a rigid motion sampled on a grid with
/// exactly representable cell centres has an exactly antisymmetric gradient.
#pragma once

#include <span>

#include "nsrel/field.hpp"

namespace nsrel {

/// d f / d x_axis written into out (same layout as f).
void partial_derivative(const Grid& grid, std::span<const double> f, int axis,
                        std::span<double> out);

VectorField gradient(const ScalarField& f);

/// grad(v)(a, b) = d v_a / d x_b
TensorField gradient(const VectorField& v);

ScalarField divergence(const VectorField& v);

}  // namespace nsrel
