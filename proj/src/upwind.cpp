#include "hitdns/upwind.hpp"

#include <vector>

#include "hitdns/parallel.hpp"

namespace hitdns {

namespace {

// Scratch for one grid line; each worker owns one.
struct LineScratch {
  explicit LineScratch(int max_points, int max_interfaces)
      : u(std::size_t(5 * max_points)),
        f(std::size_t(5 * max_points)),
        uL(std::size_t(5 * max_interfaces)),
        uR(std::size_t(5 * max_interfaces)),
        fL(std::size_t(5 * max_interfaces)),
        fR(std::size_t(5 * max_interfaces)),
        flux(std::size_t(5 * max_interfaces)) {}

  std::vector<double> u, f, uL, uR, fL, fR, flux;
};

std::array<int, 3> line_point(int dir, int a, int b, int ia, int ib, int m) {
  std::array<int, 3> p{0, 0, 0};
  p[a] = ia;
  p[b] = ib;
  p[dir] = m;
  return p;
}

void sweep(const FieldSet& u, const SpatialOptions& options, int dir, bool accumulate, FieldSet& increment) {
  const GridSpec& spec = u.spec();
  const int a = (dir == 0) ? 1 : 0;
  const int b = (dir == 2) ? 1 : 2;
  const int n = spec.n[dir];
  const int g = spec.ghost;
  const int len = n + 2 * g;
  const int nif = n + 1;
  const std::ptrdiff_t step = spec.strides()[dir];
  const double gamma = options.gas.gamma;
  const double delta = options.entropy_delta;
  const double inv_dx = 1.0 / spec.spacing[dir];
  const std::ptrdiff_t lines = std::ptrdiff_t(spec.n[a]) * spec.n[b];

  const double* src = u.data();
  const std::ptrdiff_t ups = u.point_stride();
  const std::ptrdiff_t uvs = u.var_stride();
  double* dst = increment.data();
  const std::ptrdiff_t ips = increment.point_stride();
  const std::ptrdiff_t ivs = increment.var_stride();

  parallel_for(lines, options.workers, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    LineScratch s(len, nif);
    for (std::ptrdiff_t line = begin; line < end; ++line) {
      const int ia = int(line % spec.n[a]);
      const int ib = int(line / spec.n[a]);
      const auto origin = line_point(dir, a, b, ia, ib, -g);
      const std::ptrdiff_t p0 = std::ptrdiff_t(spec.index(origin[0], origin[1], origin[2]));

      for (int v = 0; v < 5; ++v) {
        double* row = s.u.data() + std::ptrdiff_t(v) * len;
        for (int m = 0; m < len; ++m) row[m] = src[v * uvs + (p0 + m * step) * ups];
      }
      for (int m = 0; m < len; ++m) {
        Conserved<double> q;
        for (int v = 0; v < 5; ++v) q[v] = s.u[std::size_t(v * len + m)];
        Primitive<double> w;
        try {
          w = cons_to_prim<double>(q, gamma);
        } catch (const InvalidStateError& e) {
          throw InvalidStateError(e.what(), line_point(dir, a, b, ia, ib, m - g));
        }
        const Vector5<double> fq = convective_flux<double>(q, w, dir);
        for (int v = 0; v < 5; ++v) s.f[std::size_t(v * len + m)] = fq[v];
      }
      for (int v = 0; v < 5; ++v) {
        const double* urow = s.u.data() + std::ptrdiff_t(v) * len + g;
        const double* frow = s.f.data() + std::ptrdiff_t(v) * len + g;
        reconstruct_line(urow, n, Side::Left, options.weno, s.uL.data() + std::ptrdiff_t(v) * nif);
        reconstruct_line(urow, n, Side::Right, options.weno, s.uR.data() + std::ptrdiff_t(v) * nif);
        reconstruct_line(frow, n, Side::Left, options.weno, s.fL.data() + std::ptrdiff_t(v) * nif);
        reconstruct_line(frow, n, Side::Right, options.weno, s.fR.data() + std::ptrdiff_t(v) * nif);
      }
      for (int m = 0; m < nif; ++m) {
        InterfaceFluxInputs<double> in;
        for (int v = 0; v < 5; ++v) {
          const std::size_t at = std::size_t(v * nif + m);
          in.uL[v] = s.uL[at];
          in.uR[v] = s.uR[at];
          in.fL[v] = s.fL[at];
          in.fR[v] = s.fR[at];
        }
        Vector5<double> flux;
        try {
          flux = roe_interface_flux<double>(in, dir, gamma, delta);
        } catch (const InvalidStateError& e) {
          // interface m sits between grid indices m-1 and m
          throw InvalidStateError(std::string(e.what()) + " (interface left of point)",
                                  line_point(dir, a, b, ia, ib, m));
        }
        for (int v = 0; v < 5; ++v) s.flux[std::size_t(v * nif + m)] = flux[v];
      }
      for (int v = 0; v < 5; ++v) {
        const double* F = s.flux.data() + std::ptrdiff_t(v) * nif;
        for (int m = 0; m < n; ++m) {
          const double du = -(F[m + 1] - F[m]) * inv_dx;
          double& out = dst[v * ivs + (p0 + (m + g) * step) * ips];
          out = accumulate ? out + du : du;
        }
      }
    }
  });
}

}  // namespace

void hyperbolic_rhs(const FieldSet& u, const SpatialOptions& options, FieldSet& increment) {
  if (u.num_vars() != kNumConserved || increment.num_vars() != kNumConserved ||
      !(increment.spec() == u.spec())) {
    throw BoundsError("hyperbolic_rhs: field and increment shapes differ");
  }
  for (int dir = 0; dir < 3; ++dir) sweep(u, options, dir, dir > 0, increment);
}

FieldSet hyperbolic_rhs(const FieldSet& u, const SpatialOptions& options) {
  FieldSet increment(u.spec(), u.layout());
  hyperbolic_rhs(u, options, increment);
  return increment;
}

}  // namespace hitdns
