#pragma once

#include <cmath>

#include "hitdns/grid.hpp"
#include "hitdns/physics.hpp"
#include "hitdns/spatial.hpp"

namespace hitdns {

/// Square-root-density weighted average of two primitive states. Velocity
/// and total enthalpy are averaged; pressure is recovered from them.
template <typename Scalar>
Primitive<Scalar> roe_average(const Primitive<Scalar>& left, const Primitive<Scalar>& right, Scalar gamma) {
  using std::sqrt;
  if (!(left[0] > Scalar(0)) || !(right[0] > Scalar(0)) || !(left[4] > Scalar(0)) || !(right[4] > Scalar(0))) {
    throw InvalidStateError("Roe average of an invalid state");
  }
  const Scalar gm1 = gamma - Scalar(1);
  const Scalar sl = sqrt(left[0]);
  const Scalar sr = sqrt(right[0]);
  const Scalar wl = sl / (sl + sr);
  const Scalar wr = sr / (sl + sr);
  auto enthalpy = [&](const Primitive<Scalar>& w) {
    const Scalar k = Scalar(0.5) * (w[1] * w[1] + w[2] * w[2] + w[3] * w[3]);
    return gamma / gm1 * w[4] / w[0] + k;
  };
  Primitive<Scalar> avg;
  avg[0] = sl * sr;
  for (int c = 1; c <= 3; ++c) avg[c] = wl * left[c] + wr * right[c];
  const Scalar h = wl * enthalpy(left) + wr * enthalpy(right);
  const Scalar k = Scalar(0.5) * (avg[1] * avg[1] + avg[2] * avg[2] + avg[3] * avg[3]);
  avg[4] = gm1 / gamma * avg[0] * (h - k);
  if (!(avg[4] > Scalar(0))) throw InvalidStateError("Roe-averaged pressure is nonpositive");
  return avg;
}

/// Harten's fix: |lambda| outside [-delta, delta], a parabola inside.
template <typename Scalar>
Scalar entropy_fix(Scalar lambda, Scalar delta) {
  using std::abs;
  const Scalar mag = abs(lambda);
  if (delta <= Scalar(0) || mag >= delta) return mag;
  return (lambda * lambda + delta * delta) / (Scalar(2) * delta);
}

template <typename Scalar>
struct InterfaceFluxInputs {
  Vector5<Scalar> fL, fR;  ///< reconstructed flux, left/right biased
  Vector5<Scalar> uL, uR;  ///< reconstructed conserved state, left/right biased
};

/// 1/2 (fL + fR) - 1/2 X |Lambda| X^-1 (uR - uL), eigensystem taken at the
/// Roe average of uL and uR.
template <typename Scalar>
Vector5<Scalar> roe_interface_flux(const InterfaceFluxInputs<Scalar>& in, int dir, Scalar gamma, Scalar delta) {
  const Primitive<Scalar> wl = cons_to_prim<Scalar>(in.uL, gamma);
  const Primitive<Scalar> wr = cons_to_prim<Scalar>(in.uR, gamma);
  const RoeEigenSystem<Scalar> es = roe_eigensystem<Scalar>(roe_average<Scalar>(wl, wr, gamma), dir, gamma);
  Vector5<Scalar> characteristic = es.Xinv * (in.uR - in.uL);
  for (int k = 0; k < 5; ++k) characteristic[k] *= entropy_fix<Scalar>(es.lambda[k], delta);
  return Scalar(0.5) * (in.fL + in.fR) - Scalar(0.5) * (es.X * characteristic);
}

/// Convective part of du/dt: -sum_d (F_{j+1/2} - F_{j-1/2}) / dx_d, with
/// component-wise WENO5 reconstruction and Roe interface fluxes. `u` must
/// have its ghosts filled. Writes the interior of `increment` (same grid,
/// 5 variables, any layout); ghosts of `increment` are not touched.
void hyperbolic_rhs(const FieldSet& u, const SpatialOptions& options, FieldSet& increment);

FieldSet hyperbolic_rhs(const FieldSet& u, const SpatialOptions& options);

}  // namespace hitdns
