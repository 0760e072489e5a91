// Acceptance checks. `acceptance <id>` runs one criterion, no argument runs
// all of them. Each prints one PASS/FAIL line; the exit status is nonzero if
// any failed.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hitdns/bench.hpp"
#include "hitdns/decomp.hpp"
#include "hitdns/hit.hpp"
#include "hitdns/timeint.hpp"
#include "hitdns/upwind.hpp"
#include "hitdns/viscous.hpp"
#include "test_support.hpp"

using namespace hitdns;

namespace {

constexpr double kGamma = 1.4;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

int hardware_workers() { return std::max(1, int(std::thread::hardware_concurrency())); }

// 1. Density wave at uniform velocity and pressure varying in x only.
Outcome spatial_accuracy() {
  const double U = 0.3;
  std::vector<double> errors;
  for (int n : {32, 64, 128}) {
    const GridSpec g = GridSpec::periodic_box({n, 8, 8});
    const FieldSet u = test::field_from_primitive(g, Layout::ComponentContiguous, [&](double x, double, double) {
      return Primitive<double>(1 + 0.2 * std::sin(x), U, 0, 0, 1 / kGamma);
    });
    const FieldSet r = hyperbolic_rhs(u, SpatialOptions{});
    double worst = 0.0;
    for_each_interior(g, [&](int i, int j, int k) {
      const double drho = 0.2 * std::cos(i * g.spacing[0]);
      const double exact[5] = {-U * drho, -U * U * drho, 0, 0, -0.5 * U * U * U * drho};
      for (int v = 0; v < 5; ++v) worst = std::max(worst, std::abs(r(v, i, j, k) - exact[v]));
    });
    errors.push_back(worst);
  }
  const double order = test::min_observed_order(errors);
  return {order >= 4.5, fmt("Linf errors %.3e %.3e %.3e, observed order %.3f (need >= 4.5)", errors[0], errors[1],
                            errors[2], order)};
}

// 2. Derivative of sin(2y) and the viscous increment of the shear layer u = U sin y.
Outcome viscous_accuracy() {
  std::vector<double> derr, serr;
  const double mu = 0.01, U = 0.5;
  for (int n : {16, 32, 64}) {
    const GridSpec g = GridSpec::periodic_box({4, n, 4});
    FieldSet f(g, Layout::ComponentContiguous, 1);
    for_each_interior(g, [&](int i, int j, int k) { f(0, i, j, k) = std::sin(2 * j * g.spacing[1]); });
    fill_ghosts_periodic(f);
    const FieldSet d = central_derivative_4(f, 0, 1);
    double worst = 0.0;
    for_each_interior(g, [&](int i, int j, int k) {
      worst = std::max(worst, std::abs(d(0, i, j, k) - 2 * std::cos(2 * j * g.spacing[1])));
    });
    derr.push_back(worst);

    const FieldSet u = test::field_from_primitive(g, Layout::ComponentContiguous, [&](double, double y, double) {
      return Primitive<double>(1, U * std::sin(y), 0, 0, 1 / kGamma);
    });
    SpatialOptions o;
    o.gas.mu = mu;
    const FieldSet r = parabolic_rhs(u, o);
    worst = 0.0;
    for_each_interior(g, [&](int i, int j, int k) {
      const double y = j * g.spacing[1];
      const double exact[5] = {0, -mu * U * std::sin(y), 0, 0, mu * U * U * std::cos(2 * y)};
      for (int v = 0; v < 5; ++v) worst = std::max(worst, std::abs(r(v, i, j, k) - exact[v]));
    });
    serr.push_back(worst);
  }
  const double od = test::min_observed_order(derr), os = test::min_observed_order(serr);
  return {od >= 3.5 && os >= 3.5,
          fmt("derivative order %.3f, shear-layer order %.3f (need >= 3.5)", od, os)};
}

// 3. Drift of the conserved totals over 100 inviscid RK3 steps on 64^3 HIT.
Outcome conservation() {
  const GridSpec g = GridSpec::cube(64);
  const FieldSet u0 = make_initial_condition(g, HitParams{}, kGamma);
  SpatialOptions o;
  o.gas.mu = 0.0;
  o.workers = hardware_workers();
  TimeParams p;
  p.cfl = 0.4;
  p.max_steps = 100;
  const auto start = std::chrono::steady_clock::now();
  const AdvanceResult r = advance(u0, p, o);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const Diagnostics a = conserved_totals(u0);
  const Diagnostics b = r.log.back().totals;
  // Momentum starts at zero; its drift is measured against the total
  // momentum magnitude sum |rho v_d| dV.
  double scale[3] = {0, 0, 0};
  for_each_interior(g, [&](int i, int j, int k) {
    for (int d = 0; d < 3; ++d) scale[d] += std::abs(u0(1 + d, i, j, k)) * g.cell_volume();
  });
  const double dm = std::abs(b.mass - a.mass) / a.mass;
  const double de = std::abs(b.energy - a.energy) / a.energy;
  double dp = 0.0;
  for (int d = 0; d < 3; ++d) dp = std::max(dp, std::abs(b.momentum[d] - a.momentum[d]) / scale[d]);
  const bool pass = r.steps == 100 && dm < 1e-11 && de < 1e-11 && dp < 1e-11;
  return {pass, fmt("%lld steps to t=%.4f in %.1f s (%d workers); relative drift mass %.2e momentum %.2e "
                    "energy %.2e (need < 1e-11)",
                    r.steps, r.time, seconds, o.workers, dm, dp, de)};
}

// 4. Roe flux consistency, eigensystem against a finite-difference Jacobian,
// Roe property.
Outcome roe() {
  std::mt19937_64 rng(404);
  double consistency = 0.0, jacobian = 0.0, property = 0.0;
  for (int m = 0; m < 1000; ++m) {
    const Primitive<double> w = test::random_primitive(rng);
    const Conserved<double> u = prim_to_cons<double>(w, kGamma);
    const Primitive<double> w2 = test::random_primitive(rng);
    const Conserved<double> u2 = prim_to_cons<double>(w2, kGamma);
    for (int dir = 0; dir < 3; ++dir) {
      const Vector5<double> f = convective_flux<double>(u, dir, kGamma);
      const Vector5<double> F = roe_interface_flux<double>({f, f, u, u}, dir, kGamma, 0.0);
      consistency = std::max(consistency, (F - f).norm() / f.norm());

      const RoeEigenSystem<double> es = roe_eigensystem<double>(w, dir, kGamma);
      const Matrix5<double> A = es.X * es.lambda.asDiagonal() * es.Xinv;
      const Matrix5<double> J = test::fd_jacobian(u, dir, kGamma);
      jacobian = std::max(jacobian, (A - J).norm() / J.norm());

      const RoeEigenSystem<double> avg = roe_eigensystem<double>(roe_average<double>(w, w2, kGamma), dir, kGamma);
      const Vector5<double> lhs = avg.X * avg.lambda.asDiagonal() * avg.Xinv * (u2 - u);
      const Vector5<double> rhs = convective_flux<double>(u2, dir, kGamma) - f;
      property = std::max(property, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return {consistency <= 1e-12 && jacobian <= 1e-6 && property <= 1e-10,
          fmt("consistency %.2e (<= 1e-12), Jacobian %.2e (<= 1e-6), Roe property %.2e (<= 1e-10)", consistency,
              jacobian, property)};
}

double max_abs_diff(const Eigen::Vector3d& a, const Eigen::Vector3d& b) { return (a - b).cwiseAbs().maxCoeff(); }

// 5a. Anchors evaluated from the smoothness-indicator formula itself.
Outcome weno_anchors() {
  using S5 = Stencil5<double>;
  const double c = max_abs_diff(smoothness_indicators<double>(S5::Constant(2.0)), Eigen::Vector3d::Zero());
  const double l = max_abs_diff(smoothness_indicators<double>(S5(0, 1, 2, 3, 4)), Eigen::Vector3d::Ones());
  const double q =
      max_abs_diff(smoothness_indicators<double>(S5(4, 1, 0, 1, 4)), Eigen::Vector3d::Constant(13.0 / 3.0));
  const double w = max_abs_diff(nonlinear_weights<double>(Eigen::Vector3d::Zero(), WenoParams{}),
                                Eigen::Vector3d(0.1, 0.6, 0.3));
  return {c <= 1e-14 && l <= 1e-14 && q <= 1e-14 && w <= 1e-15,
          fmt("beta constant %.1e, linear %.1e, quadratic (13/3 each) %.1e; omega(0) %.1e", c, l, q, w)};
}

// 5b. The quadratic anchor as tabulated: (61/3, 13/3, 61/3).
Outcome weno_tabulated_quadratic() {
  const Eigen::Vector3d beta = smoothness_indicators<double>(Stencil5<double>(4, 1, 0, 1, 4));
  const double d = max_abs_diff(beta, Eigen::Vector3d(61.0 / 3, 13.0 / 3, 61.0 / 3));
  return {d <= 1e-14, fmt("beta = (%.15g, %.15g, %.15g) vs tabulated (61/3, 13/3, 61/3): max diff %.3e", beta[0],
                          beta[1], beta[2], d)};
}

// 6a. Synthesized 64^3 field: divergence, shell spectrum, kinetic energy.
Outcome hit_initialization() {
  const HitParams h;
  const FieldSet u = make_initial_condition(GridSpec::cube(64), h, kGamma);
  const FieldSet v = velocity_from_conserved(u);
  const double div = max_spectral_divergence(v);
  const SpectrumTable s = compute_spectrum(v);
  double worst = 0.0;
  for (int k = 2; k <= 16; ++k) {
    const double target = target_spectrum(k, h.u0, h.k0);
    worst = std::max(worst, std::abs(s.energy[std::size_t(k)] - target) / target);
  }
  const double ke = s.total();
  const bool pass = div < 1e-12 * h.u0 * h.k0 && worst <= 0.05 && std::abs(ke - 0.135) <= 0.02 * 0.135;
  return {pass, fmt("divergence %.2e (< %.1e), worst shell error %.2e for 2 <= k <= 16 (<= 5%%), KE %.6f (0.135 +- 2%%)",
                    div, 1e-12 * h.u0 * h.k0, worst, ke)};
}

// 6b. Taylor microscale and viscosity against the tabulated 1.0 and 0.006.
Outcome hit_microscale() {
  const HitParams h;
  const double lambda = taylor_microscale(h.u0, h.k0);
  const double mu = viscosity_from_re_lambda(h);
  return {std::abs(lambda - 1.0) <= 1e-6 && std::abs(mu - 0.006) <= 1e-8,
          fmt("lambda %.12f (tabulated 1.0 +- 1e-6), mu %.12f (tabulated 0.006 +- 1e-8); int k^2 E dk = %.12f, "
              "u0^2 k0^2 = %.12f",
              lambda, mu, spectrum_moment(2, h.u0, h.k0), h.u0 * h.u0 * h.k0 * h.k0)};
}

// 7. Decay of 64^3 HIT to t = 10 at CFL 0.4.
Outcome hit_decay() {
  const HitParams h;
  const GridSpec g = GridSpec::cube(64);
  const FieldSet u0 = make_initial_condition(g, h, kGamma);
  SpatialOptions o;
  o.gas.mu = viscosity_from_re_lambda(h);
  o.workers = hardware_workers();
  TimeParams p;
  p.cfl = 0.4;
  p.t_final = 10.0;
  const auto start = std::chrono::steady_clock::now();
  const AdvanceResult r = advance(u0, p, o);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const SpectrumTable s0 = compute_spectrum(velocity_from_conserved(u0));
  const SpectrumTable s1 = compute_spectrum(velocity_from_conserved(r.state));
  double high0 = 0.0, high1 = 0.0;
  for (std::size_t k = 16; k < s0.energy.size(); ++k) {
    high0 += s0.energy[k];
    high1 += s1.energy[k];
  }
  const bool pass = r.time == 10.0 && high1 > high0 && s1.total() < s0.total();
  return {pass, fmt("%lld steps to t=%.6f in %.0f s, mu %.4g; E(k>=16) %.3e -> %.3e, KE %.6f -> %.6f", r.steps,
                    r.time, seconds, o.gas.mu, high0, high1, s0.total(), s1.total())};
}

// 8. Decomposed runs against the single-domain run.
Outcome decomposition() {
  const HitParams h;
  const FieldSet u0 = make_initial_condition(GridSpec::cube(32), h, kGamma);
  SpatialOptions o;
  o.gas.mu = viscosity_from_re_lambda(h);
  TimeParams p;
  p.cfl = 0.4;
  p.max_steps = 10;
  const AdvanceResult serial = advance(u0, p, o);
  std::string detail;
  bool pass = true;
  for (const auto& dims : {std::array<int, 3>{2, 1, 1}, std::array<int, 3>{2, 2, 1}, std::array<int, 3>{2, 2, 2}}) {
    const ParallelResult par = parallel_advance(u0, dims, p, o);
    const double diff = test::max_interior_diff(par.state, serial.state);
    pass = pass && par.steps == 10 && diff <= 1e-12;
    detail += fmt("%s max diff %.2e; ", dims_to_string(dims).c_str(), diff);
  }
  return {pass, detail + "need <= 1e-12"};
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// 9. `scale` over 1, 2, 4, 8 ranks on 64^3.
Outcome scaling() {
  const double paper_ratio = 100 * comm_ratio(3.14, 24.62);
  const bool arithmetic = std::floor(paper_ratio) == 12.0 && std::abs(paper_ratio - 12.7539) < 1e-3;

  const std::string out = (std::filesystem::temp_directory_path() / "hitdns_acceptance_scale.txt").string();
  const std::string cmd = std::string(HITDNS_CLI_PATH) + " scale --set n=64 --ranks 1,2,4,8 -o " + out + " > /dev/null";
  const int status = std::system(cmd.c_str());
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "scale command failed"};
  const auto rows = read_lines(out);
  std::filesystem::remove(out);
  if (rows.size() != 5 || rows[0] != "ranks dims wall comp comm ratio speedup efficiency") {
    return {false, "unexpected table shape"};
  }
  std::vector<double> walls;
  bool ratio_ok = true;
  std::string table;
  for (std::size_t m = 1; m < rows.size(); ++m) {
    std::istringstream in(rows[m]);
    int ranks;
    std::string dims;
    double wall, comp, comm, ratio;
    in >> ranks >> dims >> wall >> comp >> comm >> ratio;
    walls.push_back(wall);
    ratio_ok = ratio_ok && std::abs(ratio - comm / wall) <= 1e-4;
    table += fmt("%d:%.3fs ", ranks, wall);
  }
  bool monotone = true;
  for (std::size_t m = 1; m < walls.size(); ++m) monotone = monotone && walls[m] <= walls[m - 1];
  return {arithmetic && ratio_ok && monotone,
          fmt("3.14/24.62 -> %.2f%%; ratio column consistent: %s; wall %snon-increasing: %s(%u hardware threads)",
              paper_ratio, ratio_ok ? "yes" : "no", monotone ? "" : "NOT ", table.c_str(),
              std::thread::hardware_concurrency())};
}

// 10. Layout benchmark: bitwise-equal outputs and the sweep shape.
Outcome layout_benchmark() {
  std::vector<double> soa, aos;
  weights_kernel(make_bench_field(64, Layout::ComponentContiguous), Traversal::lexicographic(), WenoParams{}, soa);
  weights_kernel(make_bench_field(64, Layout::Interleaved), Traversal::tiled(32, 8), WenoParams{}, aos);
  const bool equal = soa.size() == aos.size() && std::memcmp(soa.data(), aos.data(), soa.size() * sizeof(double)) == 0;

  const std::vector<BenchRecord> records =
      layout_sweep({16, 32, 48, 64}, {Traversal::lexicographic(), Traversal::tiled(32, 8)}, 5);
  std::map<int, int> layouts_per_n;
  double soa64 = 0, aos64 = 0, lex64 = 0, tiled64 = 0;
  for (const auto& r : records) {
    if (r.traversal.kind == Traversal::Kind::Lexicographic) layouts_per_n[r.n] += 1;
    if (r.n != 64) continue;
    if (r.traversal.kind == Traversal::Kind::Lexicographic) {
      (r.layout == Layout::ComponentContiguous ? soa64 : aos64) = r.median_seconds;
      if (r.layout == Layout::ComponentContiguous) lex64 = r.median_seconds;
    } else if (r.layout == Layout::ComponentContiguous) {
      tiled64 = r.median_seconds;
    }
  }
  bool shape = layouts_per_n.size() == 4;
  for (const auto& [n, count] : layouts_per_n) shape = shape && count == 2;
  std::printf("%s", layout_report(records).c_str());
  if (!(soa64 <= aos64)) std::printf("warning: ComponentContiguous slower than Interleaved at 64^3\n");
  if (!(lex64 <= tiled64)) std::printf("warning: lexicographic slower than tiled32x8 at 64^3\n");
  return {equal && shape, fmt("outputs bitwise equal: %s; sweep 4 sizes x 2 layouts: %s; 64^3 medians SoA %.3g s "
                              "AoS %.3g s, lexicographic %.3g s tiled %.3g s",
                              equal ? "yes" : "no", shape ? "yes" : "no", soa64, aos64, lex64, tiled64)};
}

// 11. Runge-Kutta amplification factors and temporal order on u' = -u.
Outcome time_integration() {
  const auto decay = [](double u) { return -u; };
  const double h = 0.1;
  const double a3 = std::abs(rk3_tvd_step(1.0, h, decay) - (1 - h + h * h / 2 - h * h * h / 6));
  const double a4 = std::abs(rk4_step(1.0, h, decay) - (1 - h + h * h / 2 - h * h * h / 6 + h * h * h * h / 24));
  std::vector<double> e3, e4;
  for (int steps : {10, 20, 40, 80}) {
    double u3 = 1.0, u4 = 1.0;
    for (int m = 0; m < steps; ++m) {
      u3 = rk3_tvd_step(u3, 2.0 / steps, decay);
      u4 = rk4_step(u4, 2.0 / steps, decay);
    }
    e3.push_back(std::abs(u3 - std::exp(-2.0)));
    e4.push_back(std::abs(u4 - std::exp(-2.0)));
  }
  const double o3 = test::min_observed_order(e3), o4 = test::min_observed_order(e4);
  return {a3 <= 1e-14 && a4 <= 1e-14 && o3 >= 2.7 && o4 >= 3.7,
          fmt("amplification error RK3 %.1e RK4 %.1e (<= 1e-14); orders %.3f (>= 2.7) %.3f (>= 3.7)", a3, a4, o3, o4)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1", spatial_accuracy},   {"2", viscous_accuracy},       {"3", conservation},    {"4", roe},
      {"5a", weno_anchors},      {"5b", weno_tabulated_quadratic}, {"6a", hit_initialization},
      {"6b", hit_microscale},    {"7", hit_decay},              {"8", decomposition},   {"9", scaling},
      {"10", layout_benchmark},  {"11", time_integration},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  bool all_pass = true, matched = false;
  for (const auto& [id, check] : criteria) {
    if (!only.empty() && id != only) continue;
    matched = true;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", id.c_str(), o.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  if (!matched) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return all_pass ? 0 : 1;
}
