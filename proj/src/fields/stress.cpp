#include "nsrel/stress.hpp"

#include <cmath>

#include "nsrel/errors.hpp"

namespace nsrel {

void ViscosityParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("shear viscosity mu must be > 0");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw DomainError("bulk viscosity eta must be >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("friction beta must be >= 0");
}

TensorField stress(const TensorField& grad_u, const ViscosityParams& visc) {
  if (!grad_u.all_finite()) throw DomainError("stress: velocity gradient is not finite");
  TensorField s(grad_u.grid());
  const int dim = grad_u.grid().dim();
  for (std::size_t k = 0; k < grad_u.size(); ++k) s.set(k, stress_at(grad_u.at(k), dim, visc));
  return s;
}

double dissipation_pairing(const TensorField& gv, const TensorField& gw,
                           const ViscosityParams& visc) {
  require_same_grid(gv.grid(), gw.grid(), "dissipation_pairing");
  const int dim = gv.grid().dim();
  CompensatedSum acc;
  for (std::size_t k = 0; k < gv.size(); ++k)
    acc.add(contract(stress_at(gv.at(k), dim, visc), gw.at(k)));
  return acc.value() * gv.grid().cell_volume();
}

}  // namespace nsrel
