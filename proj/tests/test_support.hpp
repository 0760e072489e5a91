#pragma once

// Oracles and fixtures shared by the unit and acceptance tests.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "hitdns/grid.hpp"
#include "hitdns/physics.hpp"

namespace hitdns::test {

/// Subsonic random state: rho in [0.5, 2], |v_i| < 0.5, p in [0.5, 2].
inline Primitive<double> random_primitive(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.5, 2.0);
  std::uniform_real_distribution<double> vel(-0.5, 0.5);
  return Primitive<double>(pos(rng), vel(rng), vel(rng), vel(rng), pos(rng));
}

/// Central finite-difference Jacobian of the convective flux, step 1e-7.
inline Matrix5<double> fd_jacobian(const Conserved<double>& u, int dir, double gamma) {
  const double h = 1e-7;
  Matrix5<double> J;
  for (int c = 0; c < 5; ++c) {
    Conserved<double> up = u, um = u;
    up[c] += h;
    um[c] -= h;
    J.col(c) = (convective_flux<double>(up, dir, gamma) - convective_flux<double>(um, dir, gamma)) / (2 * h);
  }
  return J;
}

/// Fills the interior of a 5-variable field from a primitive-state function
/// of the cell coordinates (x_i = i dx), then the ghosts.
inline FieldSet field_from_primitive(const GridSpec& spec, Layout layout,
                                     const std::function<Primitive<double>(double, double, double)>& w,
                                     double gamma = 1.4) {
  FieldSet f(spec, layout);
  for_each_interior(spec, [&](int i, int j, int k) {
    const Conserved<double> u =
        prim_to_cons<double>(w(i * spec.spacing[0], j * spec.spacing[1], k * spec.spacing[2]), gamma);
    for (int v = 0; v < 5; ++v) f(v, i, j, k) = u[v];
  });
  fill_ghosts_periodic(f);
  return f;
}

/// max |a - b| over the interior of one variable.
inline double max_interior_diff(const FieldSet& a, const FieldSet& b, int var) {
  double worst = 0.0;
  for_each_interior(a.spec(), [&](int i, int j, int k) {
    worst = std::max(worst, std::abs(a(var, i, j, k) - b(var, i, j, k)));
  });
  return worst;
}

inline double max_interior_diff(const FieldSet& a, const FieldSet& b) {
  double worst = 0.0;
  for (int v = 0; v < a.num_vars(); ++v) worst = std::max(worst, max_interior_diff(a, b, v));
  return worst;
}

/// Observed order from errors at successive grid doublings: the smallest
/// log2(e_m / e_{m+1}).
inline double min_observed_order(const std::vector<double>& errors) {
  double order = 1e300;
  for (std::size_t m = 0; m + 1 < errors.size(); ++m) order = std::min(order, std::log2(errors[m] / errors[m + 1]));
  return order;
}

}  // namespace hitdns::test
