#include "hitdns/hit.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <ostream>

#include <Eigen/Geometry>
#include <unsupported/Eigen/FFT>

#include "hitdns/errors.hpp"
#include "hitdns/physics.hpp"

namespace hitdns {

namespace {

using Complex = std::complex<double>;

// In-place 3D transform of an n^3 array indexed (k*n + j)*n + i. The forward
// transform is unscaled; the inverse is scaled by 1/n^3.
void fft3(std::vector<Complex>& a, int n, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  const std::size_t nn = std::size_t(n);
  const std::size_t stride[3] = {1, nn, nn * nn};
  for (int axis = 0; axis < 3; ++axis) {
    const std::size_t s = stride[axis];
    const std::size_t t1 = stride[(axis + 1) % 3];
    const std::size_t t2 = stride[(axis + 2) % 3];
    for (std::size_t b = 0; b < nn; ++b) {
      for (std::size_t c = 0; c < nn; ++c) {
        const std::size_t base = b * t1 + c * t2;
        for (std::size_t m = 0; m < nn; ++m) in[m] = a[base + m * s];
        if (inverse) {
          fft.inv(out.data(), in.data(), Eigen::Index(n));
        } else {
          fft.fwd(out.data(), in.data(), Eigen::Index(n));
        }
        for (std::size_t m = 0; m < nn; ++m) a[base + m * s] = out[m];
      }
    }
  }
}

// Signed frequency of array index idx.
int frequency(int idx, int n) { return idx < n / 2 ? idx : idx - n; }

int shell_of(double kappa_mag) { return int(std::floor(kappa_mag + 0.5)); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double unit_uniform(std::uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

void require_spectral_grid(const GridSpec& spec) {
  if (!spec.is_cube()) throw ConfigError("spectral operations need a cubic grid");
  if (spec.n[0] % 2 != 0) throw ConfigError("spectral operations need an even number of points");
}

std::vector<Complex> interior_component(const FieldSet& f, int var) {
  const int n = f.spec().n[0];
  std::vector<Complex> a(std::size_t(n) * n * n);
  std::size_t p = 0;
  for_each_interior(f.spec(), [&](int i, int j, int k) { a[p++] = f(var, i, j, k); });
  return a;
}

// Adaptive Simpson on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

void HitParams::validate() const {
  if (!(u0 > 0)) throw ConfigError("u0 must be positive");
  if (!(k0 > 0)) throw ConfigError("k0 must be positive");
  if (!(re_lambda > 0)) throw ConfigError("re_lambda must be positive");
}

double target_spectrum(double k, double u0, double k0) {
  const double r = k / k0;
  return 16.0 * std::sqrt(2.0 / std::numbers::pi) * u0 * u0 / k0 * (r * r * r * r) * std::exp(-2.0 * r * r);
}

double spectrum_moment(int power, double u0, double k0) {
  const auto f = [&](double k) { return std::pow(k, power) * target_spectrum(k, u0, k0); };
  // exp(-2 r^2) is below 1e-300 past r = 20. Fixed panels of width k0/4
  // keep the peak from slipping between the first samples.
  const int panels = 80;
  const double width = 20.0 * k0 / panels;
  const double tol = 1e-15 * u0 * u0 * std::pow(k0, power) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = p * width;
    const double b = a + width;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    sum += simpson(f, a, b, fa, fm, fb, width / 6.0 * (fa + 4.0 * fm + fb), tol, 40);
  }
  return sum;
}

double taylor_microscale(double u0, double k0) {
  const double gradient_variance = 2.0 / 15.0 * spectrum_moment(2, u0, k0);
  return std::sqrt(u0 * u0 / gradient_variance);
}

double viscosity_from_re_lambda(const HitParams& params) {
  params.validate();
  const double rho0 = 1.0;
  return rho0 * params.u0 * taylor_microscale(params.u0, params.k0) / params.re_lambda;
}

FieldSet synthesize_velocity(const GridSpec& spec, const HitParams& params, double* imag_residue) {
  require_spectral_grid(spec);
  params.validate();
  const int n = spec.n[0];
  const int half = n / 2;
  const double dk = 2.0 * std::numbers::pi / spec.length[0];
  const std::size_t total = std::size_t(n) * n * n;
  auto at = [&](int mx, int my, int mz) {
    auto wrap = [n](int m) { return std::size_t(m < 0 ? m + n : m); };
    return (wrap(mz) * std::size_t(n) + wrap(my)) * std::size_t(n) + wrap(mx);
  };
  auto excluded = [&](int mx, int my, int mz) {
    return (mx == 0 && my == 0 && mz == 0) || mx == -half || my == -half || mz == -half;
  };

  // Modes per shell, both halves of the spectrum.
  const int max_shell = shell_of(dk * std::sqrt(3.0) * half) + 1;
  std::vector<long long> count(std::size_t(max_shell + 1), 0);
  for (int mz = -half; mz < half; ++mz)
    for (int my = -half; my < half; ++my)
      for (int mx = -half; mx < half; ++mx) {
        if (excluded(mx, my, mz)) continue;
        ++count[std::size_t(shell_of(dk * std::sqrt(double(mx * mx + my * my + mz * mz))))];
      }

  std::array<std::vector<Complex>, 3> coeff;
  for (auto& c : coeff) c.assign(total, Complex(0.0, 0.0));
  const std::uint64_t seed_key = splitmix64(params.seed);
  const double scale = double(total);  // undo the inverse transform's 1/N^3

  for (int mz = -half; mz < half; ++mz)
    for (int my = -half; my < half; ++my)
      for (int mx = -half; mx < half; ++mx) {
        if (excluded(mx, my, mz)) continue;
        const bool representative = mz > 0 || (mz == 0 && (my > 0 || (my == 0 && mx > 0)));
        if (!representative) continue;
        const Vector3<double> kappa(dk * mx, dk * my, dk * mz);
        const double kmag = kappa.norm();
        const int shell = shell_of(kmag);
        const double amplitude = std::sqrt(2.0 * target_spectrum(double(shell), params.u0, params.k0) /
                                           double(count[std::size_t(shell)]));

        // Orthonormal basis of the plane normal to kappa.
        const Vector3<double> khat = kappa / kmag;
        int axis = 0;
        for (int d = 1; d < 3; ++d)
          if (std::abs(khat[d]) < std::abs(khat[axis])) axis = d;
        const Vector3<double> e1 = khat.cross(Vector3<double>::Unit(axis)).normalized();
        const Vector3<double> e2 = khat.cross(e1);

        const std::uint64_t key = (std::uint64_t(mz + n) * std::uint64_t(2 * n) + std::uint64_t(my + n)) *
                                      std::uint64_t(2 * n) +
                                  std::uint64_t(mx + n);
        const double theta = 2.0 * std::numbers::pi * unit_uniform(splitmix64(seed_key ^ (2 * key)));
        const double phi = 2.0 * std::numbers::pi * unit_uniform(splitmix64(seed_key ^ (2 * key + 1)));
        const Vector3<double> dir = std::cos(theta) * e1 + std::sin(theta) * e2;
        const Complex phase = std::polar(amplitude * scale, phi);
        for (int c = 0; c < 3; ++c) {
          coeff[std::size_t(c)][at(mx, my, mz)] = dir[c] * phase;
          coeff[std::size_t(c)][at(-mx, -my, -mz)] = std::conj(dir[c] * phase);
        }
      }

  FieldSet velocity(spec, Layout::ComponentContiguous, 3);
  double residue = 0.0;
  for (int c = 0; c < 3; ++c) {
    fft3(coeff[std::size_t(c)], n, true);
    std::size_t p = 0;
    for_each_interior(spec, [&](int i, int j, int k) {
      const Complex value = coeff[std::size_t(c)][p++];
      residue = std::max(residue, std::abs(value.imag()));
      velocity(c, i, j, k) = value.real();
    });
  }
  if (imag_residue) *imag_residue = residue;
  fill_ghosts_periodic(velocity);
  return velocity;
}

FieldSet make_initial_condition(const GridSpec& spec, const HitParams& params, double gamma) {
  const FieldSet velocity = synthesize_velocity(spec, params);
  FieldSet u(spec, Layout::ComponentContiguous);
  const double rho = 1.0;
  const double p = 1.0 / gamma;
  for_each_interior(spec, [&](int i, int j, int k) {
    const Primitive<double> w(rho, velocity(0, i, j, k), velocity(1, i, j, k), velocity(2, i, j, k), p);
    const Conserved<double> q = prim_to_cons<double>(w, gamma);
    for (int v = 0; v < 5; ++v) u(v, i, j, k) = q[v];
  });
  fill_ghosts_periodic(u);
  return u;
}

FieldSet velocity_from_conserved(const FieldSet& conserved) {
  FieldSet velocity(conserved.spec(), Layout::ComponentContiguous, 3);
  for_each_interior(conserved.spec(), [&](int i, int j, int k) {
    const double rho = conserved(0, i, j, k);
    if (!(rho > 0)) throw InvalidStateError("nonpositive density", std::array<int, 3>{i, j, k});
    for (int c = 0; c < 3; ++c) velocity(c, i, j, k) = conserved(1 + c, i, j, k) / rho;
  });
  fill_ghosts_periodic(velocity);
  return velocity;
}

double SpectrumTable::total() const {
  double sum = 0.0;
  for (double e : energy) sum += e;
  return sum;
}

SpectrumTable compute_spectrum(const FieldSet& velocity) {
  require_spectral_grid(velocity.spec());
  if (velocity.num_vars() != 3) throw BoundsError("compute_spectrum expects a 3-component velocity field");
  const int n = velocity.spec().n[0];
  const double dk = 2.0 * std::numbers::pi / velocity.spec().length[0];
  const double norm = 1.0 / (double(n) * n * n);
  SpectrumTable table;
  table.energy.assign(std::size_t(shell_of(dk * std::sqrt(3.0) * (n / 2)) + 2), 0.0);
  for (int c = 0; c < 3; ++c) {
    std::vector<Complex> a = interior_component(velocity, c);
    fft3(a, n, false);
    std::size_t p = 0;
    for (int kz = 0; kz < n; ++kz)
      for (int ky = 0; ky < n; ++ky)
        for (int kx = 0; kx < n; ++kx) {
          const double fx = frequency(kx, n), fy = frequency(ky, n), fz = frequency(kz, n);
          const int shell = shell_of(dk * std::sqrt(fx * fx + fy * fy + fz * fz));
          table.energy[std::size_t(shell)] += 0.5 * std::norm(a[p++] * norm);
        }
  }
  return table;
}

double max_spectral_divergence(const FieldSet& velocity) {
  require_spectral_grid(velocity.spec());
  const int n = velocity.spec().n[0];
  const double dk = 2.0 * std::numbers::pi / velocity.spec().length[0];
  const double norm = 1.0 / (double(n) * n * n);
  std::array<std::vector<Complex>, 3> hat;
  for (int c = 0; c < 3; ++c) {
    hat[std::size_t(c)] = interior_component(velocity, c);
    fft3(hat[std::size_t(c)], n, false);
  }
  double worst = 0.0;
  std::size_t p = 0;
  for (int kz = 0; kz < n; ++kz)
    for (int ky = 0; ky < n; ++ky)
      for (int kx = 0; kx < n; ++kx, ++p) {
        const Complex div = dk * (double(frequency(kx, n)) * hat[0][p] + double(frequency(ky, n)) * hat[1][p] +
                                  double(frequency(kz, n)) * hat[2][p]) * norm;
        worst = std::max(worst, std::abs(div));
      }
  return worst;
}

void write_spectrum(std::ostream& out, const SpectrumTable& table, int n) {
  out.precision(17);
  for (int k = 1; k <= n / 2 - 1 && std::size_t(k) < table.energy.size(); ++k) {
    out << k << ' ' << table.energy[std::size_t(k)] << '\n';
  }
}

}  // namespace hitdns
