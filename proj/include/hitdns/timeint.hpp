#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hitdns/grid.hpp"
#include "hitdns/spatial.hpp"
#include "hitdns/viscous.hpp"

namespace hitdns {

enum class Scheme { RK3TVD, RK4 };
enum class CflMode {
  Max,  ///< dt = cfl / max_d max_x (|v_d| + a) / dx_d
  Sum,  ///< dt = cfl / max_x sum_d (|v_d| + a) / dx_d
};

const char* to_string(Scheme scheme);
const char* to_string(CflMode mode);

struct TimeParams {
  Scheme scheme = Scheme::RK3TVD;
  std::optional<double> dt;
  std::optional<double> cfl;
  CflMode cfl_mode = CflMode::Max;
  std::optional<double> t_final;
  std::optional<long long> max_steps;

  /// Exactly one of dt/cfl, positive; at least one stop condition.
  void validate() const;
};

/// Shu-Osher three-stage TVD Runge-Kutta step for any State with vector
/// arithmetic (double, Eigen vectors).
template <typename State, typename Rhs>
State rk3_tvd_step(const State& u, double dt, Rhs&& rhs) {
  const State u1 = u + dt * rhs(u);
  const State u2 = 0.75 * u + 0.25 * (u1 + dt * rhs(u1));
  return (1.0 / 3.0) * u + (2.0 / 3.0) * (u2 + dt * rhs(u2));
}

/// Classical four-stage Runge-Kutta step.
template <typename State, typename Rhs>
State rk4_step(const State& u, double dt, Rhs&& rhs) {
  const State k1 = rhs(u);
  const State k2 = rhs(State(u + 0.5 * dt * k1));
  const State k3 = rhs(State(u + 0.5 * dt * k2));
  const State k4 = rhs(State(u + dt * k3));
  return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Domain totals of the conserved variables (value times cell volume),
/// summed pairwise in a fixed order.
struct Diagnostics {
  double mass = 0.0;
  std::array<double, 3> momentum{};
  double energy = 0.0;
};

Diagnostics conserved_totals(const FieldSet& fields);

/// Pointwise maxima used for step control and logging.
struct WaveStats {
  double max_rate = 0.0;      ///< max over points and dims of (|v_d| + a) / dx_d
  double max_rate_sum = 0.0;  ///< max over points of sum_d (|v_d| + a) / dx_d
  double max_speed = 0.0;     ///< max over points and dims of |v_d| + a
};

WaveStats wave_stats(const FieldSet& fields, double gamma, int workers = 1);

/// Throws SolverError when every wavespeed is zero.
double compute_dt(const FieldSet& fields, double cfl, CflMode mode, double gamma, int workers = 1);
double dt_from_stats(const WaveStats& stats, double cfl, CflMode mode);

/// Full right-hand side du/dt = convective + viscous. Refreshes the ghosts
/// of its input with the filler before evaluating.
class NavierStokesRhs {
 public:
  NavierStokesRhs(const GridSpec& spec, const SpatialOptions& options, GhostFiller fill = {});
  NavierStokesRhs(const NavierStokesRhs&) = delete;
  NavierStokesRhs& operator=(const NavierStokesRhs&) = delete;

  void operator()(FieldSet& state, FieldSet& increment);

  const SpatialOptions& options() const { return options_; }
  /// Time spent in operator kernels, excluding ghost refreshes.
  double kernel_seconds() const { return kernel_seconds_; }

 private:
  SpatialOptions options_;
  GhostFiller fill_;
  ParabolicOperator parabolic_;
  double kernel_seconds_ = 0.0;
  double fill_seconds_ = 0.0;
};

/// Convenience: periodic ghost fill followed by the full right-hand side.
FieldSet rhs(FieldSet& fields, const SpatialOptions& options);

/// Runge-Kutta stepper over FieldSets with preallocated stage buffers
/// (two states + one increment for RK3, one state + four increments for RK4).
class Integrator {
 public:
  using RhsFunction = std::function<void(FieldSet&, FieldSet&)>;

  Integrator(const GridSpec& spec, Layout layout, Scheme scheme, RhsFunction rhs, int workers = 1);

  /// Advances `u` by dt in place (the result is built in stage buffers and
  /// swapped in). Invalid intermediate states surface as SolverError naming
  /// the stage.
  void step(FieldSet& u, double dt);

  double update_seconds() const { return update_seconds_; }

 private:
  void evaluate(int stage, FieldSet& state, FieldSet& increment);

  Scheme scheme_;
  RhsFunction rhs_;
  int workers_;
  FieldSet stage_a_, stage_b_;
  std::vector<FieldSet> increments_;
  double update_seconds_ = 0.0;
};

struct StepRecord {
  long long step = 0;
  double time = 0.0;
  double dt = 0.0;
  Diagnostics totals;
  double max_wavespeed = 0.0;
  double wall_seconds = 0.0;
};

/// `step t dt mass mom_x mom_y mom_z energy wall_seconds`
std::string format_step(const StepRecord& record);

using StepObserver = std::function<void(const StepRecord&, const FieldSet&)>;

/// Hooks that let the step loop run on one subdomain of a decomposed grid.
struct AdvanceContext {
  GhostFiller fill;                                     ///< default: periodic wrap
  std::function<double(double)> reduce_max;             ///< default: identity
  std::function<Diagnostics(const Diagnostics&)> reduce_sum;  ///< default: identity
};

struct AdvanceResult {
  FieldSet state;
  double time = 0.0;
  long long steps = 0;
  std::vector<StepRecord> log;
  double compute_seconds = 0.0;  ///< kernels and stage updates only
};

/// Steps until t_final (last step shortened to land on it) or max_steps,
/// whichever comes first, calling `observer` after every step.
AdvanceResult advance(FieldSet u0, const TimeParams& params, const SpatialOptions& options,
                      const StepObserver& observer = {}, double t0 = 0.0, const AdvanceContext& context = {});

}  // namespace hitdns
