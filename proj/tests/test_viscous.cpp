#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hitdns/viscous.hpp"
#include "test_support.hpp"

using namespace hitdns;
using test::field_from_primitive;

namespace {

constexpr double kGamma = 1.4;

SpatialOptions with_mu(double mu) {
  SpatialOptions o;
  o.gas.mu = mu;
  return o;
}

double derivative_error(int n) {
  const GridSpec g = GridSpec::periodic_box({4, n, 4});
  FieldSet f(g, Layout::Interleaved, 1);
  for_each_interior(g, [&](int i, int j, int k) { f(0, i, j, k) = std::sin(2 * j * g.spacing[1]); });
  fill_ghosts_periodic(f);
  const FieldSet d = central_derivative_4(f, 0, 1);
  double worst = 0.0;
  for_each_interior(g, [&](int i, int j, int k) {
    worst = std::max(worst, std::abs(d(0, i, j, k) - 2 * std::cos(2 * j * g.spacing[1])));
  });
  return worst;
}

// u = U sin y at uniform rho, p: d(rho u)/dt = -mu U sin y and
// de/dt = d/dy (u tau_xy) = mu U^2 cos 2y.
double shear_error(int n) {
  const double mu = 0.01, U = 0.5;
  const GridSpec g = GridSpec::periodic_box({4, n, 4});
  const FieldSet u = field_from_primitive(g, Layout::ComponentContiguous, [&](double, double y, double) {
    return Primitive<double>(1, U * std::sin(y), 0, 0, 1 / kGamma);
  });
  const FieldSet r = parabolic_rhs(u, with_mu(mu));
  double worst = 0.0;
  for_each_interior(g, [&](int i, int j, int k) {
    const double y = j * g.spacing[1];
    const double exact[5] = {0, -mu * U * std::sin(y), 0, 0, mu * U * U * std::cos(2 * y)};
    for (int v = 0; v < 5; ++v) worst = std::max(worst, std::abs(r(v, i, j, k) - exact[v]));
  });
  return worst;
}

// T = 1 + 0.1 sin x at rest: de/dt = kappa T'' with kappa = mu / ((gamma - 1) Pr).
double conduction_error(int n) {
  const double mu = 0.01;
  const GridSpec g = GridSpec::periodic_box({n, 4, 4});
  const FieldSet u = field_from_primitive(g, Layout::Interleaved, [&](double x, double, double) {
    return Primitive<double>(1, 0, 0, 0, (1 + 0.1 * std::sin(x)) / kGamma);
  });
  const FieldSet r = parabolic_rhs(u, with_mu(mu));
  const double kappa = mu / ((kGamma - 1) * 0.72);
  double worst = 0.0;
  for_each_interior(g, [&](int i, int j, int k) {
    worst = std::max(worst, std::abs(r(4, i, j, k) + kappa * 0.1 * std::sin(i * g.spacing[0])));
    for (int v = 0; v < 4; ++v) worst = std::max(worst, std::abs(r(v, i, j, k)));
  });
  return worst;
}

Primitive<double> smooth_state(double x, double y, double z) {
  return Primitive<double>(1 + 0.1 * std::cos(x + z), 0.2 * std::sin(y + z), 0.1 * std::cos(x) + 0.05 * std::sin(z),
                           0.1 * std::sin(x - y), 1 / kGamma + 0.05 * std::sin(y));
}

}  // namespace

TEST_SUITE("viscous") {
  TEST_CASE("fourth-order central derivative") {
    const GridSpec g = GridSpec::cube(8);
    FieldSet c(g, Layout::ComponentContiguous, 2);
    c.values().setConstant(3.0);
    for (int dir = 0; dir < 3; ++dir) {
      const FieldSet d = central_derivative_4(c, 1, dir);
      CHECK(d.num_vars() == 1);
      CHECK(d.values().cwiseAbs().maxCoeff() == 0.0);
    }
    std::vector<double> errors;
    for (int n : {16, 32, 64}) errors.push_back(derivative_error(n));
    CHECK(test::min_observed_order(errors) >= 3.8);
  }

  TEST_CASE("no viscous increment without gradients or viscosity") {
    const GridSpec g = GridSpec::cube(8);
    const FieldSet uniform = field_from_primitive(g, Layout::ComponentContiguous, [](double, double, double) {
      return Primitive<double>(1.1, 0.2, 0.3, -0.1, 0.9);
    });
    CHECK(parabolic_rhs(uniform, with_mu(0.05)).values().cwiseAbs().maxCoeff() <= 1e-15);

    const FieldSet smooth = field_from_primitive(g, Layout::ComponentContiguous, smooth_state);
    CHECK(parabolic_rhs(smooth, with_mu(0.0)).values().cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("mass row vanishes, increment is linear in mu and conservative") {
    const GridSpec g = GridSpec::cube(12);
    const FieldSet u = field_from_primitive(g, Layout::Interleaved, smooth_state);
    const FieldSet r1 = parabolic_rhs(u, with_mu(0.003));
    const FieldSet r2 = parabolic_rhs(u, with_mu(0.006));
    SpatialOptions scaled = with_mu(0.003);
    scaled.gas.visc_scale = 2.0;
    const FieldSet r3 = parabolic_rhs(u, scaled);
    double scale = 0.0;
    for_each_interior(g, [&](int i, int j, int k) {
      CHECK(r1(0, i, j, k) == 0.0);
      for (int v = 1; v < 5; ++v) scale = std::max(scale, std::abs(r1(v, i, j, k)));
    });
    CHECK(scale > 0.0);
    for (int v = 0; v < 5; ++v) {
      double diff = 0.0, diff3 = 0.0, sum = 0.0, abs_sum = 0.0;
      for_each_interior(g, [&](int i, int j, int k) {
        diff = std::max(diff, std::abs(r2(v, i, j, k) - 2 * r1(v, i, j, k)));
        diff3 = std::max(diff3, std::abs(r3(v, i, j, k) - r2(v, i, j, k)));
        sum += r1(v, i, j, k);
        abs_sum += std::abs(r1(v, i, j, k));
      });
      CHECK(diff <= 1e-14 * scale);
      CHECK(diff3 <= 1e-14 * scale);
      CHECK(std::abs(sum) <= 1e-12 * (abs_sum + 1e-300));
    }
  }

  TEST_CASE("accumulate adds onto the existing increment") {
    const GridSpec g = GridSpec::cube(8);
    const FieldSet u = field_from_primitive(g, Layout::ComponentContiguous, smooth_state);
    const SpatialOptions o = with_mu(0.01);
    const FieldSet fresh = parabolic_rhs(u, o);
    ParabolicOperator op(g, [](FieldSet& f) { fill_ghosts_periodic(f); });
    FieldSet inc(g, Layout::ComponentContiguous);
    for_each_interior(g, [&](int i, int j, int k) {
      for (int v = 0; v < 5; ++v) inc(v, i, j, k) = 1.0;
    });
    op.apply(u, o, inc, true);
    double worst = 0.0;
    for_each_interior(g, [&](int i, int j, int k) {
      for (int v = 0; v < 5; ++v) worst = std::max(worst, std::abs(inc(v, i, j, k) - 1.0 - fresh(v, i, j, k)));
    });
    CHECK(worst <= 1e-15);
    op.apply(u, o, inc, false);
    CHECK(test::max_interior_diff(inc, fresh) == 0.0);
  }

  TEST_CASE("shear layer converges at fourth order") {
    std::vector<double> errors;
    for (int n : {16, 32, 64}) errors.push_back(shear_error(n));
    CHECK(test::min_observed_order(errors) >= 3.5);
  }

  TEST_CASE("heat conduction converges at fourth order") {
    std::vector<double> errors;
    for (int n : {16, 32, 64}) errors.push_back(conduction_error(n));
    CHECK(test::min_observed_order(errors) >= 3.5);
  }
}
