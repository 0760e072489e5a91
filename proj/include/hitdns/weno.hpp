#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "hitdns/grid.hpp"

namespace hitdns {

/// Five consecutive point values f_{j-2} .. f_{j+2}.
template <typename Scalar>
using Stencil5 = Eigen::Matrix<Scalar, 5, 1>;

struct WenoParams {
  double epsilon = 1e-6;
  int power = 2;
  std::array<double, 3> optimal_weights{0.1, 0.6, 0.3};
};

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> smoothness_indicators(const Stencil5<Scalar>& s) {
  const Scalar c13 = Scalar(13) / Scalar(12);
  const Scalar c14 = Scalar(1) / Scalar(4);
  const Scalar d1 = s[0] - 2 * s[1] + s[2];
  const Scalar e1 = s[0] - 4 * s[1] + 3 * s[2];
  const Scalar d2 = s[1] - 2 * s[2] + s[3];
  const Scalar e2 = s[1] - s[3];
  const Scalar d3 = s[2] - 2 * s[3] + s[4];
  const Scalar e3 = 3 * s[2] - 4 * s[3] + s[4];
  return {c13 * d1 * d1 + c14 * e1 * e1, c13 * d2 * d2 + c14 * e2 * e2, c13 * d3 * d3 + c14 * e3 * e3};
}

namespace detail {
template <typename Scalar>
Scalar int_pow(Scalar x, int p) {
  Scalar r = Scalar(1);
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}
}  // namespace detail

/// omega_k = alpha_k / sum(alpha), alpha_k = c_k / (eps + beta_k)^p
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> nonlinear_weights(const Eigen::Matrix<Scalar, 3, 1>& beta, const WenoParams& params) {
  Eigen::Matrix<Scalar, 3, 1> alpha;
  for (int k = 0; k < 3; ++k) {
    alpha[k] = Scalar(params.optimal_weights[k]) / detail::int_pow(Scalar(params.epsilon) + beta[k], params.power);
  }
  return alpha / alpha.sum();
}

/// The three third-order interpolants at j+1/2.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> candidate_interpolants(const Stencil5<Scalar>& s) {
  const Scalar third = Scalar(1) / Scalar(3);
  const Scalar sixth = Scalar(1) / Scalar(6);
  return {third * s[0] - Scalar(7) * sixth * s[1] + Scalar(11) * sixth * s[2],
          -sixth * s[1] + Scalar(5) * sixth * s[2] + third * s[3],
          third * s[2] + Scalar(5) * sixth * s[3] - sixth * s[4]};
}

/// Left-biased WENO5 value at the interface j+1/2, where s is centered on j.
template <typename Scalar>
Scalar reconstruct_left(const Stencil5<Scalar>& s, const WenoParams& params) {
  return nonlinear_weights<Scalar>(smoothness_indicators<Scalar>(s), params).dot(candidate_interpolants<Scalar>(s));
}

/// Right-biased WENO5 value at the interface j-1/2, where s is centered on j:
/// the left-biased formula mirrored around that interface. The right-biased
/// value at j+1/2 therefore comes from the stencil centered on j+1.
template <typename Scalar>
Scalar reconstruct_right(const Stencil5<Scalar>& s, const WenoParams& params) {
  return reconstruct_left<Scalar>(s.reverse().eval(), params);
}

enum class Side { Left, Right };

/// Reconstructs all n+1 interfaces i+1/2, i in [-1, n-1], of one grid line.
/// `line` points at the value of grid index 0 and must be readable on
/// [-3, n+2] with unit stride; `out` receives n+1 values.
void reconstruct_line(const double* line, int n, Side side, const WenoParams& params, double* out);

/// Interface values of one variable of a ghost-filled field along `dir`.
/// Rows are the n[dir]+1 interfaces of a grid line; columns enumerate the
/// lines lexicographically over the two transverse interior dimensions
/// (lower dimension fastest).
Eigen::MatrixXd reconstruct_field(const FieldSet& field, int var, int dir, Side side, const WenoParams& params);

}  // namespace hitdns
