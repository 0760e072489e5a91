#include "hitdns/viscous.hpp"

#include "hitdns/parallel.hpp"
#include "hitdns/physics.hpp"

namespace hitdns {

namespace {

inline double d4(const double* f, std::ptrdiff_t step, double inv_12dx) {
  return (-f[2 * step] + 8.0 * f[step] - 8.0 * f[-step] + f[-2 * step]) * inv_12dx;
}

}  // namespace

FieldSet central_derivative_4(const FieldSet& field, int var, int dir) {
  const GridSpec& s = field.spec();
  FieldSet out(s, Layout::ComponentContiguous, 1);
  const std::ptrdiff_t step = s.strides()[dir] * field.point_stride();
  const double inv_12dx = 1.0 / (12.0 * s.spacing[dir]);
  for_each_interior(s, [&](int i, int j, int k) {
    const double* f = field.data() + field.offset(var, s.index(i, j, k));
    out(0, i, j, k) = d4(f, step, inv_12dx);
  });
  return out;
}

ParabolicOperator::ParabolicOperator(const GridSpec& spec, GhostFiller fill)
    : spec_(spec),
      fill_(std::move(fill)),
      primitive_(spec, Layout::ComponentContiguous, 4),
      flux_(spec, Layout::ComponentContiguous, 12) {}

void ParabolicOperator::apply(const FieldSet& u, const SpatialOptions& options, FieldSet& increment,
                              bool accumulate) {
  const GridSpec& s = spec_;
  if (!(u.spec() == s) || !(increment.spec() == s)) throw BoundsError("parabolic operator: grid mismatch");
  const GasModel& gas = options.gas;
  const double gamma = gas.gamma;
  const auto stride = s.strides();
  const std::ptrdiff_t total = std::ptrdiff_t(s.total_points());

  // Primitive velocity and temperature everywhere, ghosts included.
  {
    const double* q = u.data();
    const std::ptrdiff_t ups = u.point_stride();
    const std::ptrdiff_t uvs = u.var_stride();
    double* w = primitive_.data();
    parallel_for(total, options.workers, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
      for (std::ptrdiff_t p = begin; p < end; ++p) {
        Conserved<double> c;
        for (int v = 0; v < 5; ++v) c[v] = q[v * uvs + p * ups];
        Primitive<double> prim;
        try {
          prim = cons_to_prim<double>(c, gamma);
        } catch (const InvalidStateError& e) {
          const int ex = s.extent(0), ey = s.extent(1);
          throw InvalidStateError(e.what(), std::array<int, 3>{int(p % ex) - s.ghost, int((p / ex) % ey) - s.ghost,
                                                               int(p / (std::ptrdiff_t(ex) * ey)) - s.ghost});
        }
        w[0 * total + p] = prim[1];
        w[1 * total + p] = prim[2];
        w[2 * total + p] = prim[3];
        w[3 * total + p] = gamma * prim[4] / prim[0];
      }
    });
  }

  // Viscous fluxes on the interior.
  const double inv_12dx[3] = {1.0 / (12.0 * s.spacing[0]), 1.0 / (12.0 * s.spacing[1]),
                              1.0 / (12.0 * s.spacing[2])};
  const std::ptrdiff_t columns = std::ptrdiff_t(s.n[1]) * s.n[2];
  {
    const double* w = primitive_.data();
    double* fx = flux_.data();
    parallel_for(columns, options.workers, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
      for (std::ptrdiff_t col = begin; col < end; ++col) {
        const int j = int(col % s.n[1]);
        const int k = int(col / s.n[1]);
        for (int i = 0; i < s.n[0]; ++i) {
          const std::ptrdiff_t p = std::ptrdiff_t(s.index(i, j, k));
          Matrix3<double> grad;  // grad(c, d) = du_c / dx_d
          Vector3<double> grad_t;
          for (int d = 0; d < 3; ++d) {
            for (int c = 0; c < 3; ++c) grad(c, d) = d4(w + c * total + p, stride[d], inv_12dx[d]);
            grad_t[d] = d4(w + 3 * total + p, stride[d], inv_12dx[d]);
          }
          const Matrix3<double> tau = viscous_stress<double>(grad, gas.mu, gas.visc_scale);
          const Vector3<double> q = heat_flux<double>(grad_t, gas.mu, gas.visc_scale, gamma, gas.prandtl);
          const Vector3<double> vel(w[p], w[total + p], w[2 * total + p]);
          for (int d = 0; d < 3; ++d) {
            fx[(4 * d + 0) * total + p] = tau(0, d);
            fx[(4 * d + 1) * total + p] = tau(1, d);
            fx[(4 * d + 2) * total + p] = tau(2, d);
            fx[(4 * d + 3) * total + p] = vel.dot(tau.col(d)) - q[d];
          }
        }
      }
    });
  }
  fill_(flux_);

  // Divergence of the flux vectors.
  {
    const double* fx = flux_.data();
    double* out = increment.data();
    const std::ptrdiff_t ips = increment.point_stride();
    const std::ptrdiff_t ivs = increment.var_stride();
    parallel_for(columns, options.workers, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
      for (std::ptrdiff_t col = begin; col < end; ++col) {
        const int j = int(col % s.n[1]);
        const int k = int(col / s.n[1]);
        for (int i = 0; i < s.n[0]; ++i) {
          const std::ptrdiff_t p = std::ptrdiff_t(s.index(i, j, k));
          if (!accumulate) out[0 * ivs + p * ips] = 0.0;
          for (int c = 0; c < 4; ++c) {
            double sum = 0.0;
            for (int d = 0; d < 3; ++d) sum += d4(fx + (4 * d + c) * total + p, stride[d], inv_12dx[d]);
            double& dst = out[(c + 1) * ivs + p * ips];
            dst = accumulate ? dst + sum : sum;
          }
        }
      }
    });
  }
}

FieldSet parabolic_rhs(const FieldSet& u, const SpatialOptions& options) {
  FieldSet increment(u.spec(), u.layout());
  ParabolicOperator op(u.spec(), [](FieldSet& f) { fill_ghosts_periodic(f); });
  op.apply(u, options, increment, false);
  return increment;
}

}  // namespace hitdns
