/// @file korn.hpp
/// @brief Discrete Korn-type ratios and their empirical suprema.
///
/// korn_ratio(z) = ||z||^2_{W^{1,2}} / ( ||S(grad z)||^2_{L^2} + || R |z|^2 ||_{L^1} )
///
/// Without a weight this is the plain Korn quotient, finite only when S(grad z)
/// does not vanish. The weighted form controls rigid motions through R.
#pragma once

#include <cstdint>
#include <vector>

#include "nsrel/field.hpp"
#include "nsrel/stress.hpp"

namespace nsrel {

/// Throws DegenerateFieldError when the denominator is below rounding level
/// relative to the numerator (e.g. a rigid motion without weight).
double korn_ratio(const VectorField& z, const ViscosityParams& visc);

/// Weighted form; weight must be >= 0 with positive integral (DomainError otherwise).
double korn_ratio(const VectorField& z, const ViscosityParams& visc, const ScalarField& weight);

/// Random smooth field vanishing on every wall of the grid: a sum of
/// sin(k pi xi) modes on bounded axes (periodic modes on periodic axes) with
/// coefficients ~ U(-1,1) / (k^2 + l^2). Stream is keyed by (seed, index).
VectorField random_zero_boundary_field(const Grid& grid, std::uint64_t seed, std::uint64_t index,
                                       int modes = 4);

struct KornEnsemble {
  std::vector<double> ratios;
  std::vector<double> running_sup;  ///< running_sup[n] = max(ratios[0..n])
  double constant = 0.0;            ///< running_sup.back()
};

KornEnsemble korn_ensemble(const Grid& grid, const ViscosityParams& visc, std::uint64_t seed,
                           int count, int modes = 4);

}  // namespace nsrel
