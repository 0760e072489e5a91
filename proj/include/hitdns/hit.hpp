#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hitdns/grid.hpp"

namespace hitdns {

/// Decaying isotropic turbulence setup.
struct HitParams {
  double u0 = 0.3;         ///< rms velocity fluctuation
  double k0 = 4.0;         ///< wavenumber of peak energy
  double re_lambda = 50.0; ///< Taylor-microscale Reynolds number
  std::uint64_t seed = 1;

  void validate() const;
};

/// E(k) = 16 sqrt(2/pi) u0^2/k0 (k/k0)^4 exp(-2 (k/k0)^2)
double target_spectrum(double k, double u0, double k0);

/// Integral of k^power E(k) over [0, inf) by adaptive Simpson quadrature.
double spectrum_moment(int power, double u0, double k0);

/// lambda = sqrt(u0^2 / <(du/dx)^2>), <(du/dx)^2> = (2/15) int k^2 E(k) dk.
double taylor_microscale(double u0, double k0);

/// mu = rho0 u0 lambda / Re_lambda with rho0 = 1.
double viscosity_from_re_lambda(const HitParams& params);

/// Random solenoidal velocity (3 variables: u, v, w) whose shell energies
/// equal target_spectrum at the integer shell wavenumber. Only the phases
/// and in-plane directions are random; they are drawn from a splitmix64
/// hash of (seed, wavevector), so the field is reproducible on any
/// platform. Requires a cubic grid with even n. Ghosts are filled.
/// If `imag_residue` is given it receives the largest imaginary part left
/// after the inverse transform.
FieldSet synthesize_velocity(const GridSpec& spec, const HitParams& params, double* imag_residue = nullptr);

/// rho = 1, p = 1/gamma, velocity from synthesize_velocity; conserved
/// variables in component-contiguous layout with ghosts filled.
FieldSet make_initial_condition(const GridSpec& spec, const HitParams& params, double gamma);

/// Velocity (3 variables) decoded from a conserved field.
FieldSet velocity_from_conserved(const FieldSet& conserved);

/// Shell-summed kinetic energy; energy[k] covers |kappa| in [k-1/2, k+1/2).
struct SpectrumTable {
  std::vector<double> energy;

  double total() const;
};

/// E(shell) = sum over the shell of 1/2 |u_hat|^2, with u_hat the Fourier
/// coefficients (forward transform divided by N^3), so the shell sum equals
/// the domain mean of 1/2 |v|^2.
SpectrumTable compute_spectrum(const FieldSet& velocity);

/// max over wavevectors of |kappa . u_hat(kappa)|.
double max_spectral_divergence(const FieldSet& velocity);

/// Two columns `k E(k)` for shells 1 .. n/2 - 1.
void write_spectrum(std::ostream& out, const SpectrumTable& table, int n);

}  // namespace hitdns
