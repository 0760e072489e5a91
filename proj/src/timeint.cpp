#include "hitdns/timeint.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <span>

#include "hitdns/errors.hpp"
#include "hitdns/parallel.hpp"
#include "hitdns/upwind.hpp"

namespace hitdns {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 16) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

// Elementwise out = expr(i) over the whole buffer, split across workers.
template <typename Expr>
void update(FieldSet& out, int workers, Expr&& expr) {
  const std::ptrdiff_t size = std::ptrdiff_t(out.size());
  parallel_for(size, workers, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    out.values().segment(begin, end - begin) = expr(begin, end - begin);
  });
}

}  // namespace

const char* to_string(Scheme scheme) { return scheme == Scheme::RK3TVD ? "rk3" : "rk4"; }
const char* to_string(CflMode mode) { return mode == CflMode::Max ? "max" : "sum"; }

void TimeParams::validate() const {
  if (dt.has_value() == cfl.has_value()) throw ConfigError("exactly one of dt and cfl must be set");
  if (dt && !(*dt > 0)) throw ConfigError("dt must be positive");
  if (cfl && !(*cfl > 0)) throw ConfigError("cfl must be positive");
  if (!t_final && !max_steps) throw ConfigError("a stop condition (t_final or max_steps) is required");
  if (t_final && !(*t_final > 0)) throw ConfigError("t_final must be positive");
  if (max_steps && *max_steps < 0) throw ConfigError("max_steps must be nonnegative");
}

Diagnostics conserved_totals(const FieldSet& fields) {
  const GridSpec& s = fields.spec();
  std::vector<double> buffer;
  buffer.reserve(s.interior_points());
  std::array<double, 5> totals{};
  for (int v = 0; v < 5; ++v) {
    buffer.clear();
    for_each_interior(s, [&](int i, int j, int k) { buffer.push_back(fields(v, i, j, k)); });
    totals[std::size_t(v)] = pairwise_sum(buffer) * s.cell_volume();
  }
  return {totals[0], {totals[1], totals[2], totals[3]}, totals[4]};
}

WaveStats wave_stats(const FieldSet& fields, double gamma, int workers) {
  const GridSpec& s = fields.spec();
  const std::ptrdiff_t columns = std::ptrdiff_t(s.n[1]) * s.n[2];
  std::vector<WaveStats> partial(std::size_t(std::max(workers, 1)));
  // one slot per chunk; chunks are disjoint so no synchronization is needed
  const int chunks = std::max(workers, 1);
  parallel_for(chunks, workers, [&](std::ptrdiff_t cb, std::ptrdiff_t ce) {
    for (std::ptrdiff_t c = cb; c < ce; ++c) {
      WaveStats local;
      const std::ptrdiff_t begin = columns * c / chunks;
      const std::ptrdiff_t end = columns * (c + 1) / chunks;
      for (std::ptrdiff_t col = begin; col < end; ++col) {
        const int j = int(col % s.n[1]);
        const int k = int(col / s.n[1]);
        for (int i = 0; i < s.n[0]; ++i) {
          Conserved<double> q;
          for (int v = 0; v < 5; ++v) q[v] = fields(v, i, j, k);
          Primitive<double> w;
          try {
            w = cons_to_prim<double>(q, gamma);
          } catch (const InvalidStateError& e) {
            throw InvalidStateError(e.what(), std::array<int, 3>{i, j, k});
          }
          const double a = sound_speed<double>(w, gamma);
          double sum = 0.0;
          for (int d = 0; d < 3; ++d) {
            const double speed = std::abs(w[1 + d]) + a;
            const double rate = speed / s.spacing[d];
            local.max_speed = std::max(local.max_speed, speed);
            local.max_rate = std::max(local.max_rate, rate);
            sum += rate;
          }
          local.max_rate_sum = std::max(local.max_rate_sum, sum);
        }
      }
      partial[std::size_t(c)] = local;
    }
  });
  WaveStats out;
  for (const auto& p : partial) {
    out.max_rate = std::max(out.max_rate, p.max_rate);
    out.max_rate_sum = std::max(out.max_rate_sum, p.max_rate_sum);
    out.max_speed = std::max(out.max_speed, p.max_speed);
  }
  return out;
}

double dt_from_stats(const WaveStats& stats, double cfl, CflMode mode) {
  const double rate = mode == CflMode::Max ? stats.max_rate : stats.max_rate_sum;
  if (!(rate > 0.0)) throw SolverError("cannot derive a time step: all wavespeeds are zero");
  return cfl / rate;
}

double compute_dt(const FieldSet& fields, double cfl, CflMode mode, double gamma, int workers) {
  return dt_from_stats(wave_stats(fields, gamma, workers), cfl, mode);
}

NavierStokesRhs::NavierStokesRhs(const GridSpec& spec, const SpatialOptions& options, GhostFiller fill)
    : options_(options),
      fill_(fill ? std::move(fill) : GhostFiller([](FieldSet& f) { fill_ghosts_periodic(f); })),
      parabolic_(spec, [this](FieldSet& f) {
        const auto start = Clock::now();
        fill_(f);
        fill_seconds_ += seconds_since(start);
      }) {}

void NavierStokesRhs::operator()(FieldSet& state, FieldSet& increment) {
  fill_(state);
  const auto start = Clock::now();
  const double fill_before = fill_seconds_;
  hyperbolic_rhs(state, options_, increment);
  if (options_.gas.viscous_coefficient() != 0.0) parabolic_.apply(state, options_, increment, true);
  kernel_seconds_ += seconds_since(start) - (fill_seconds_ - fill_before);
}

FieldSet rhs(FieldSet& fields, const SpatialOptions& options) {
  NavierStokesRhs op(fields.spec(), options);
  FieldSet increment(fields.spec(), fields.layout());
  op(fields, increment);
  return increment;
}

Integrator::Integrator(const GridSpec& spec, Layout layout, Scheme scheme, RhsFunction rhs, int workers)
    : scheme_(scheme),
      rhs_(std::move(rhs)),
      workers_(workers),
      stage_a_(spec, layout),
      stage_b_(spec, layout) {
  increments_.assign(scheme == Scheme::RK3TVD ? 1 : 4, FieldSet(spec, layout));
  if (scheme == Scheme::RK4) stage_b_ = FieldSet();
}

void Integrator::evaluate(int stage, FieldSet& state, FieldSet& increment) {
  try {
    rhs_(state, increment);
  } catch (const InvalidStateError& e) {
    throw SolverError("stage " + std::to_string(stage) + ": " + e.what());
  }
}

void Integrator::step(FieldSet& u, double dt) {
  if (scheme_ == Scheme::RK3TVD) {
    FieldSet& r = increments_[0];
    FieldSet& u1 = stage_a_;
    FieldSet& u2 = stage_b_;
    evaluate(1, u, r);
    auto t0 = Clock::now();
    update(u1, workers_, [&](auto b, auto n) { return u.values().segment(b, n) + dt * r.values().segment(b, n); });
    update_seconds_ += seconds_since(t0);
    evaluate(2, u1, r);
    t0 = Clock::now();
    update(u2, workers_, [&](auto b, auto n) {
      return 0.75 * u.values().segment(b, n) +
             0.25 * (u1.values().segment(b, n) + dt * r.values().segment(b, n));
    });
    update_seconds_ += seconds_since(t0);
    evaluate(3, u2, r);
    t0 = Clock::now();
    update(u1, workers_, [&](auto b, auto n) {
      return (1.0 / 3.0) * u.values().segment(b, n) +
             (2.0 / 3.0) * (u2.values().segment(b, n) + dt * r.values().segment(b, n));
    });
    update_seconds_ += seconds_since(t0);
    std::swap(u, u1);
    return;
  }

  FieldSet& s = stage_a_;
  FieldSet& k1 = increments_[0];
  FieldSet& k2 = increments_[1];
  FieldSet& k3 = increments_[2];
  FieldSet& k4 = increments_[3];
  evaluate(1, u, k1);
  auto t0 = Clock::now();
  update(s, workers_, [&](auto b, auto n) { return u.values().segment(b, n) + 0.5 * dt * k1.values().segment(b, n); });
  update_seconds_ += seconds_since(t0);
  evaluate(2, s, k2);
  t0 = Clock::now();
  update(s, workers_, [&](auto b, auto n) { return u.values().segment(b, n) + 0.5 * dt * k2.values().segment(b, n); });
  update_seconds_ += seconds_since(t0);
  evaluate(3, s, k3);
  t0 = Clock::now();
  update(s, workers_, [&](auto b, auto n) { return u.values().segment(b, n) + dt * k3.values().segment(b, n); });
  update_seconds_ += seconds_since(t0);
  evaluate(4, s, k4);
  t0 = Clock::now();
  update(s, workers_, [&](auto b, auto n) {
    return u.values().segment(b, n) +
           (dt / 6.0) * (k1.values().segment(b, n) + 2.0 * k2.values().segment(b, n) +
                         2.0 * k3.values().segment(b, n) + k4.values().segment(b, n));
  });
  update_seconds_ += seconds_since(t0);
  std::swap(u, s);
}

std::string format_step(const StepRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%lld %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.6e", r.step, r.time, r.dt,
                r.totals.mass, r.totals.momentum[0], r.totals.momentum[1], r.totals.momentum[2], r.totals.energy,
                r.wall_seconds);
  return buf;
}

AdvanceResult advance(FieldSet u0, const TimeParams& params, const SpatialOptions& options,
                      const StepObserver& observer, double t0, const AdvanceContext& context) {
  params.validate();
  options.gas.validate();
  const GhostFiller fill = context.fill ? context.fill : GhostFiller([](FieldSet& f) { fill_ghosts_periodic(f); });
  auto reduce_max = [&](double x) { return context.reduce_max ? context.reduce_max(x) : x; };
  auto reduce_sum = [&](const Diagnostics& d) { return context.reduce_sum ? context.reduce_sum(d) : d; };

  AdvanceResult result;
  result.time = t0;
  result.state = std::move(u0);
  FieldSet& u = result.state;

  NavierStokesRhs ns(u.spec(), options, fill);
  Integrator integrator(u.spec(), u.layout(), params.scheme,
                        [&ns](FieldSet& state, FieldSet& inc) { ns(state, inc); }, options.workers);

  const double gamma = options.gas.gamma;
  const double tol = params.t_final ? 1e-12 * std::max(1.0, std::abs(*params.t_final)) : 0.0;
  double other_compute = 0.0;
  while (true) {
    if (params.max_steps && result.steps >= *params.max_steps) break;
    if (params.t_final && result.time >= *params.t_final - tol) break;

    const auto start = Clock::now();
    double dt;
    if (params.dt) {
      dt = *params.dt;
    } else {
      const auto t_stats = Clock::now();
      WaveStats stats = wave_stats(u, gamma, options.workers);
      other_compute += seconds_since(t_stats);
      stats.max_rate = reduce_max(stats.max_rate);
      stats.max_rate_sum = reduce_max(stats.max_rate_sum);
      dt = dt_from_stats(stats, *params.cfl, params.cfl_mode);
    }
    if (params.t_final) dt = std::min(dt, *params.t_final - result.time);

    try {
      integrator.step(u, dt);
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(result.steps + 1) + " " + e.what());
    }
    ++result.steps;
    result.time += dt;

    const auto t_diag = Clock::now();
    StepRecord record;
    record.step = result.steps;
    record.time = result.time;
    record.dt = dt;
    const WaveStats stats = wave_stats(u, gamma, options.workers);
    const Diagnostics local = conserved_totals(u);
    other_compute += seconds_since(t_diag);
    record.totals = reduce_sum(local);
    record.max_wavespeed = reduce_max(stats.max_speed);
    record.wall_seconds = seconds_since(start);
    result.log.push_back(record);
    if (observer) observer(record, u);
  }
  result.compute_seconds = ns.kernel_seconds() + integrator.update_seconds() + other_compute;
  return result;
}

}  // namespace hitdns
