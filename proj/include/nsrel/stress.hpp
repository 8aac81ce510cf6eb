/// @file stress.hpp
/// @brief Newtonian viscous stress and the dissipation pairing.
#pragma once

#include "nsrel/field.hpp"
#include "nsrel/small_vec.hpp"

namespace nsrel {

struct ViscosityParams {
  double mu = 1.0;    ///< shear viscosity, > 0
  double eta = 0.0;   ///< bulk viscosity, >= 0
  double beta = 0.0;  ///< boundary friction coefficient, >= 0

  /// Throws DomainError on mu <= 0, eta < 0 or beta < 0.
  void validate() const;
};

/// S = mu (G + G^t - 2/3 div I) + eta div I with div = trace(G).
/// The 2/3 coefficient is kept in every dimension.
inline Mat2 stress_at(const Mat2& g, int dim, const ViscosityParams& visc) {
  const double div = dim == 2 ? g[0][0] + g[1][1] : g[0][0];
  const double diag = (visc.eta - 2.0 * visc.mu / 3.0) * div;
  Mat2 s{};
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) s[a][b] = visc.mu * (g[a][b] + g[b][a]);
    s[a][a] += diag;
  }
  return s;
}

TensorField stress(const TensorField& grad_u, const ViscosityParams& visc);

/// Integral of S(gv) : gw over the grid (compensated, fixed order).
double dissipation_pairing(const TensorField& gv, const TensorField& gw,
                           const ViscosityParams& visc);

}  // namespace nsrel
