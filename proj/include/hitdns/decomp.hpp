#pragma once

#include <array>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "hitdns/grid.hpp"
#include "hitdns/timeint.hpp"

namespace hitdns {

/// Face order of RankLayout::neighbors.
enum Face { MinusX = 0, PlusX, MinusY, PlusY, MinusZ, PlusZ };

/// One rank's box in a Cartesian decomposition of a periodic grid.
struct RankLayout {
  int rank = 0;
  int size = 1;
  std::array<int, 3> dims{1, 1, 1};
  std::array<int, 3> rank_coord{};
  std::array<int, 3> local_n{};
  std::array<int, 3> offset{};  ///< first global interior index owned
  std::array<int, 6> neighbors{};
};

/// Rank id of a coordinate, x fastest; coordinates wrap periodically.
int rank_of(std::array<int, 3> coord, std::array<int, 3> dims);

/// Layouts for every rank, indexed by rank. Throws ConfigError when a
/// dimension is not divisible or a local extent is below the ghost width.
std::vector<RankLayout> decompose(const GridSpec& global, std::array<int, 3> dims);

/// Factorization of `ranks` minimizing the local surface area; ties go to
/// the factorization that splits x first, then y.
std::array<int, 3> auto_dims(int ranks, const GridSpec& global);

std::string dims_to_string(std::array<int, 3> dims);

/// Shared state of an in-process rank runtime: one mailbox per
/// (source, destination, tag), a reusable barrier and reduction slots.
/// Any rank may abort; blocked ranks then throw instead of waiting forever.
class World {
 public:
  explicit World(int size);

  int size() const { return size_; }

  void send(int from, int to, int tag, std::vector<double> message);
  std::vector<double> recv(int to, int from, int tag);
  void barrier();
  void abort();
  bool aborted() const;

  /// Elementwise reduction in rank order, so every rank gets the same bits.
  std::vector<double> allreduce(int rank, const std::vector<double>& value, bool take_max);

 private:
  void wait(std::unique_lock<std::mutex>& lock, const std::function<bool()>& ready);

  int size_;
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::map<std::tuple<int, int, int>, std::deque<std::vector<double>>> mailboxes_;
  int barrier_count_ = 0;
  long long barrier_generation_ = 0;
  std::vector<std::vector<double>> slots_;
  bool aborted_ = false;
};

/// A rank's handle on its World.
class Communicator {
 public:
  Communicator(World& world, int rank) : world_(&world), rank_(rank) {}

  int rank() const { return rank_; }
  int size() const { return world_->size(); }

  void send(int to, int tag, std::vector<double> message) { world_->send(rank_, to, tag, std::move(message)); }
  std::vector<double> recv(int from, int tag) { return world_->recv(rank_, from, tag); }
  void barrier() { world_->barrier(); }
  double allreduce_max(double value);
  std::vector<double> allreduce_sum(const std::vector<double>& values);

 private:
  World* world_;
  int rank_;
};

/// Runs `body` on `size` rank threads sharing one World. If any rank throws,
/// the others are released and the first genuine failure is rethrown with
/// the rank identifier added.
void run_ranks(int size, const std::function<void(Communicator&)>& body);

/// Values in one halo message along `dir`: num_vars * ghost * area, where the
/// area spans the ghost-extended box in the dimensions exchanged earlier.
std::size_t halo_message_size(const GridSpec& local, int dir, int num_vars);

/// Fills all ghost layers of a rank's field from its neighbors in three
/// sequential phases (x, y, z) so edges and corners end up correct. Time
/// spent sending and waiting is added to `comm_seconds` when given. Throws
/// ProtocolError when a received message has the wrong size.
void halo_exchange(FieldSet& local, const RankLayout& layout, Communicator& comm, double* comm_seconds = nullptr);

/// Interior of `global` owned by `layout`, in the same memory layout,
/// ghosts zeroed.
FieldSet scatter(const FieldSet& global, const RankLayout& layout);

/// Copies a rank's interior into its place in `global`.
void gather_into(FieldSet& global, const FieldSet& local, const RankLayout& layout);

/// Timing of one rank over a run.
struct TimingReport {
  int rank = 0;
  std::vector<double> step_wall;  ///< wall seconds per step
  double wall_seconds = 0.0;
  double comm_seconds = 0.0;  ///< halo exchange and reductions
  double comp_seconds = 0.0;  ///< operator kernels and stage updates

  /// comm / (comm + comp)
  double ratio() const;
};

struct ParallelResult {
  FieldSet state;  ///< gathered global field, ghosts filled
  double time = 0.0;
  long long steps = 0;
  std::vector<StepRecord> log;  ///< rank 0's records (totals are global)
  std::vector<TimingReport> timing;
  double wall_seconds = 0.0;
};

/// Scatters `u0`, advances every rank with halo exchange in place of the
/// periodic wrap and global reductions for step control and diagnostics,
/// then gathers the interiors.
ParallelResult parallel_advance(const FieldSet& u0, std::array<int, 3> dims, const TimeParams& params,
                                const SpatialOptions& options);

/// One configuration of a scaling study; times are maxima over ranks.
struct ScalingRun {
  int ranks = 1;
  std::array<int, 3> dims{1, 1, 1};
  double wall = 0.0;
  double comp = 0.0;
  double comm = 0.0;
};

ScalingRun summarize(const ParallelResult& result, std::array<int, 3> dims);

/// Fraction of wall time spent communicating.
double comm_ratio(double comm, double wall);

enum class ScalingMode { Strong, Weak };

/// Columns `ranks dims wall comp comm ratio speedup efficiency`, one row per
/// run, baseline = first run. Strong: speedup = wall0 / wall, efficiency =
/// speedup / (ranks / ranks0). Weak: efficiency = wall0 / wall, speedup =
/// efficiency * ranks / ranks0. `ratio` is comm_ratio(comm, wall).
std::string scaling_report(const std::vector<ScalingRun>& runs, ScalingMode mode = ScalingMode::Strong);

}  // namespace hitdns
