#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "hitdns/errors.hpp"

namespace hitdns {

template <typename Scalar>
using Vector5 = Eigen::Matrix<Scalar, 5, 1>;
template <typename Scalar>
using Matrix5 = Eigen::Matrix<Scalar, 5, 5>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

/// [rho, rho*u, rho*v, rho*w, e]
template <typename Scalar>
using Conserved = Vector5<Scalar>;
/// [rho, u, v, w, p]
template <typename Scalar>
using Primitive = Vector5<Scalar>;

/// Ideal gas with constant viscosity. The stress and heat-flux terms scale
/// with mu * visc_scale, where visc_scale stands for M_inf / Re_inf.
struct GasModel {
  double gamma = 1.4;
  double prandtl = 0.72;
  double mu = 0.0;
  double visc_scale = 1.0;

  double viscous_coefficient() const { return mu * visc_scale; }

  void validate() const {
    if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
    if (!(prandtl > 0.0)) throw ConfigError("Prandtl number must be positive");
    if (!(mu >= 0.0)) throw ConfigError("viscosity must be nonnegative");
    if (!(visc_scale >= 0.0)) throw ConfigError("visc_scale must be nonnegative");
  }
};

template <typename Scalar>
Primitive<Scalar> cons_to_prim(const Conserved<Scalar>& u, Scalar gamma) {
  using std::isfinite;
  const Scalar rho = u[0];
  if (!(rho > Scalar(0))) throw InvalidStateError("nonpositive density " + std::to_string(double(rho)));
  const Scalar inv_rho = Scalar(1) / rho;
  Primitive<Scalar> w;
  w[0] = rho;
  w[1] = u[1] * inv_rho;
  w[2] = u[2] * inv_rho;
  w[3] = u[3] * inv_rho;
  const Scalar kinetic = Scalar(0.5) * (u[1] * w[1] + u[2] * w[2] + u[3] * w[3]);
  w[4] = (gamma - Scalar(1)) * (u[4] - kinetic);
  if (!(w[4] > Scalar(0))) throw InvalidStateError("nonpositive pressure " + std::to_string(double(w[4])));
  return w;
}

template <typename Scalar>
Conserved<Scalar> prim_to_cons(const Primitive<Scalar>& w, Scalar gamma) {
  const Scalar rho = w[0];
  if (!(rho > Scalar(0))) throw InvalidStateError("nonpositive density " + std::to_string(double(rho)));
  if (!(w[4] > Scalar(0))) throw InvalidStateError("nonpositive pressure " + std::to_string(double(w[4])));
  Conserved<Scalar> u;
  u[0] = rho;
  u[1] = rho * w[1];
  u[2] = rho * w[2];
  u[3] = rho * w[3];
  u[4] = w[4] / (gamma - Scalar(1)) + Scalar(0.5) * rho * (w[1] * w[1] + w[2] * w[2] + w[3] * w[3]);
  return u;
}

/// Convective flux in direction `dir` from the conserved and primitive forms
/// of the same state (no validity checks).
template <typename Scalar>
Vector5<Scalar> convective_flux(const Conserved<Scalar>& u, const Primitive<Scalar>& w, int dir) {
  const Scalar vn = w[1 + dir];
  Vector5<Scalar> f;
  f[0] = u[0] * vn;
  f[1] = u[1] * vn;
  f[2] = u[2] * vn;
  f[3] = u[3] * vn;
  f[1 + dir] += w[4];
  f[4] = (u[4] + w[4]) * vn;
  return f;
}

template <typename Scalar>
Vector5<Scalar> convective_flux(const Conserved<Scalar>& u, int dir, Scalar gamma) {
  return convective_flux<Scalar>(u, cons_to_prim<Scalar>(u, gamma), dir);
}

/// Newtonian stress from grad(i, j) = du_i/dx_j. Uses the symmetric strain
/// (du_i/dx_j + du_j/dx_i) minus the dilatation term.
template <typename Scalar>
Matrix3<Scalar> viscous_stress(const Matrix3<Scalar>& grad, Scalar mu, Scalar visc_scale) {
  const Scalar coeff = mu * visc_scale;
  const Scalar dilatation = grad.trace();
  Matrix3<Scalar> tau = grad + grad.transpose();
  tau.diagonal().array() -= Scalar(2) / Scalar(3) * dilatation;
  return coeff * tau;
}

/// Fourier heat flux with temperature T = gamma * p / rho.
template <typename Scalar>
Vector3<Scalar> heat_flux(const Vector3<Scalar>& grad_t, Scalar mu, Scalar visc_scale, Scalar gamma,
                          Scalar prandtl) {
  return -(mu * visc_scale / ((gamma - Scalar(1)) * prandtl)) * grad_t;
}

template <typename Scalar>
Scalar sound_speed(const Primitive<Scalar>& w, Scalar gamma) {
  using std::sqrt;
  return sqrt(gamma * w[4] / w[0]);
}

/// |v_dir| + a
template <typename Scalar>
Scalar max_wavespeed(const Conserved<Scalar>& u, int dir, Scalar gamma) {
  using std::abs;
  const Primitive<Scalar> w = cons_to_prim<Scalar>(u, gamma);
  return abs(w[1 + dir]) + sound_speed<Scalar>(w, gamma);
}

/// Right eigenvectors X (columns), eigenvalues, and X^-1 of the convective
/// flux Jacobian. Columns are ordered as the ascending eigenvalues
/// {v_n - a, v_n, v_n, v_n, v_n + a}: the two acoustic waves bracket the
/// entropy wave and the two shear waves (tangential directions in cyclic
/// order after `dir`).
template <typename Scalar>
struct RoeEigenSystem {
  Matrix5<Scalar> X;
  Vector5<Scalar> lambda;
  Matrix5<Scalar> Xinv;
};

template <typename Scalar>
RoeEigenSystem<Scalar> roe_eigensystem(const Primitive<Scalar>& w, int dir, Scalar gamma) {
  using std::sqrt;
  if (!(w[0] > Scalar(0)) || !(w[4] > Scalar(0))) {
    throw InvalidStateError("eigensystem requested at an invalid state");
  }
  const Scalar a = sqrt(gamma * w[4] / w[0]);
  const Scalar gm1 = gamma - Scalar(1);
  const Vector3<Scalar> vel(w[1], w[2], w[3]);
  const Scalar kinetic = Scalar(0.5) * vel.squaredNorm();
  const Scalar enthalpy = a * a / gm1 + kinetic;
  const Scalar vn = vel[dir];
  const int t1 = (dir + 1) % 3;
  const int t2 = (dir + 2) % 3;

  RoeEigenSystem<Scalar> es;
  es.lambda << vn - a, vn, vn, vn, vn + a;

  Matrix5<Scalar>& X = es.X;
  X.setZero();
  X(0, 0) = Scalar(1);
  X(0, 1) = Scalar(1);
  X(0, 4) = Scalar(1);
  for (int c = 0; c < 3; ++c) {
    X(1 + c, 0) = vel[c];
    X(1 + c, 1) = vel[c];
    X(1 + c, 4) = vel[c];
  }
  X(1 + dir, 0) -= a;
  X(1 + dir, 4) += a;
  X(4, 0) = enthalpy - vn * a;
  X(4, 1) = kinetic;
  X(4, 4) = enthalpy + vn * a;
  X(1 + t1, 2) = Scalar(1);
  X(4, 2) = vel[t1];
  X(1 + t2, 3) = Scalar(1);
  X(4, 3) = vel[t2];

  Matrix5<Scalar>& L = es.Xinv;
  L.setZero();
  const Scalar b1 = gm1 / (a * a);
  const Scalar half = Scalar(0.5);
  L(0, 0) = half * (b1 * kinetic + vn / a);
  L(4, 0) = half * (b1 * kinetic - vn / a);
  L(1, 0) = Scalar(1) - b1 * kinetic;
  for (int c = 0; c < 3; ++c) {
    L(0, 1 + c) = -half * b1 * vel[c];
    L(4, 1 + c) = -half * b1 * vel[c];
    L(1, 1 + c) = b1 * vel[c];
  }
  L(0, 1 + dir) -= half / a;
  L(4, 1 + dir) += half / a;
  L(0, 4) = half * b1;
  L(4, 4) = half * b1;
  L(1, 4) = -b1;
  L(2, 0) = -vel[t1];
  L(2, 1 + t1) = Scalar(1);
  L(3, 0) = -vel[t2];
  L(3, 1 + t2) = Scalar(1);
  return es;
}

}  // namespace hitdns
