#pragma once

#include "hitdns/grid.hpp"
#include "hitdns/spatial.hpp"

namespace hitdns {

/// (-f_{j+2} + 8 f_{j+1} - 8 f_{j-1} + f_{j-2}) / (12 dx) of variable `var`
/// along `dir`, evaluated on the interior. Returns a one-variable field whose
/// ghosts are zero. `field` must have its ghosts filled.
FieldSet central_derivative_4(const FieldSet& field, int var, int dir);

/// Viscous part of du/dt in divergence form: sum_d d/dx_d of the viscous
/// flux vector [0, tau_xd, tau_yd, tau_zd, v . tau_d - q_d].
///
/// Velocity and temperature gradients come from 4th-order central
/// differences of the primitive fields; the 12 nonzero flux components are
/// stored in a scratch field, their ghosts refreshed with `fill`, and
/// differentiated again. The operator keeps that scratch between calls.
class ParabolicOperator {
 public:
  ParabolicOperator(const GridSpec& spec, GhostFiller fill);

  /// Adds (accumulate) or writes the viscous increment into the interior of
  /// `increment`. `u` must have its ghosts filled.
  void apply(const FieldSet& u, const SpatialOptions& options, FieldSet& increment, bool accumulate);

 private:
  GridSpec spec_;
  GhostFiller fill_;
  FieldSet primitive_;  // u, v, w, T over the ghosted box
  FieldSet flux_;       // 4 components per direction
};

/// Single-domain convenience: periodic ghost refresh, fresh increment.
FieldSet parabolic_rhs(const FieldSet& u, const SpatialOptions& options);

}  // namespace hitdns
