#include "hitdns/decomp.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "hitdns/errors.hpp"

namespace hitdns {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Thrown in ranks released by another rank's failure.
class AbortedError : public ProtocolError {
 public:
  AbortedError() : ProtocolError("rank runtime aborted") {}
};

int wrap(int c, int n) { return ((c % n) + n) % n; }

// Index range [lo, hi) of a dimension during the exchange phase `dir`:
// dimensions already exchanged span the ghosts too.
std::array<std::array<int, 2>, 3> phase_box(const GridSpec& s, int dir) {
  std::array<std::array<int, 2>, 3> box{};
  for (int d = 0; d < 3; ++d) {
    if (d < dir) {
      box[d] = {-s.ghost, s.n[d] + s.ghost};
    } else {
      box[d] = {0, s.n[d]};
    }
  }
  return box;
}

template <typename Visit>
void for_each_in_slab(const GridSpec& s, int dir, int lo, int hi, Visit&& visit) {
  auto box = phase_box(s, dir);
  box[dir] = {lo, hi};
  for (int k = box[2][0]; k < box[2][1]; ++k)
    for (int j = box[1][0]; j < box[1][1]; ++j)
      for (int i = box[0][0]; i < box[0][1]; ++i) visit(s.index(i, j, k));
}

std::vector<double> pack(const FieldSet& f, int dir, int lo, int hi) {
  std::vector<double> buf;
  buf.reserve(halo_message_size(f.spec(), dir, f.num_vars()));
  const double* data = f.data();
  for (int v = 0; v < f.num_vars(); ++v) {
    for_each_in_slab(f.spec(), dir, lo, hi, [&](std::size_t p) { buf.push_back(data[f.offset(v, p)]); });
  }
  return buf;
}

void unpack(FieldSet& f, int dir, int lo, int hi, const std::vector<double>& buf) {
  std::size_t at = 0;
  double* data = f.data();
  for (int v = 0; v < f.num_vars(); ++v) {
    for_each_in_slab(f.spec(), dir, lo, hi, [&](std::size_t p) { data[f.offset(v, p)] = buf[at++]; });
  }
}

std::string prefix(int rank, const char* what) { return "rank " + std::to_string(rank) + ": " + what; }

// Rethrows `error` as the same type with the rank named.
[[noreturn]] void rethrow_with_rank(std::exception_ptr error, int rank) {
  try {
    std::rethrow_exception(error);
  } catch (const InvalidStateError& e) {
    throw e.with_rank(rank);
  } catch (const SolverError& e) {
    throw SolverError(prefix(rank, e.what()));
  } catch (const ProtocolError& e) {
    throw ProtocolError(prefix(rank, e.what()));
  } catch (const ConfigError& e) {
    throw ConfigError(prefix(rank, e.what()));
  } catch (const BoundsError& e) {
    throw BoundsError(prefix(rank, e.what()));
  } catch (const IoError& e) {
    throw IoError(prefix(rank, e.what()));
  }
}

}  // namespace

int rank_of(std::array<int, 3> coord, std::array<int, 3> dims) {
  return (wrap(coord[2], dims[2]) * dims[1] + wrap(coord[1], dims[1])) * dims[0] + wrap(coord[0], dims[0]);
}

std::vector<RankLayout> decompose(const GridSpec& global, std::array<int, 3> dims) {
  static const char* names[3] = {"x", "y", "z"};
  for (int d = 0; d < 3; ++d) {
    if (dims[d] <= 0) throw ConfigError(std::string("rank count must be positive in ") + names[d]);
    if (global.n[d] % dims[d] != 0) {
      throw ConfigError(std::string("grid size ") + std::to_string(global.n[d]) + " in " + names[d] +
                        " is not divisible by " + std::to_string(dims[d]) + " ranks");
    }
    if (global.n[d] / dims[d] < global.ghost) {
      throw ConfigError(std::string("local size in ") + names[d] + " is smaller than the ghost width");
    }
  }
  const int size = dims[0] * dims[1] * dims[2];
  std::vector<RankLayout> layouts(static_cast<std::size_t>(size));
  for (int r = 0; r < size; ++r) {
    RankLayout& l = layouts[std::size_t(r)];
    l.rank = r;
    l.size = size;
    l.dims = dims;
    l.rank_coord = {r % dims[0], (r / dims[0]) % dims[1], r / (dims[0] * dims[1])};
    for (int d = 0; d < 3; ++d) {
      l.local_n[d] = global.n[d] / dims[d];
      l.offset[d] = l.rank_coord[d] * l.local_n[d];
      std::array<int, 3> lo = l.rank_coord, hi = l.rank_coord;
      lo[d] -= 1;
      hi[d] += 1;
      l.neighbors[std::size_t(2 * d)] = rank_of(lo, dims);
      l.neighbors[std::size_t(2 * d + 1)] = rank_of(hi, dims);
    }
  }
  return layouts;
}

std::array<int, 3> auto_dims(int ranks, const GridSpec& global) {
  if (ranks <= 0) throw ConfigError("rank count must be positive");
  std::array<int, 3> best{0, 0, 0};
  double best_area = std::numeric_limits<double>::infinity();
  for (int a = ranks; a >= 1; --a) {
    if (ranks % a != 0) continue;
    for (int b = ranks / a; b >= 1; --b) {
      if ((ranks / a) % b != 0) continue;
      const std::array<int, 3> dims{a, b, ranks / a / b};
      bool ok = true;
      std::array<double, 3> local{};
      for (int d = 0; d < 3; ++d) {
        ok = ok && global.n[d] % dims[d] == 0 && global.n[d] / dims[d] >= global.ghost;
        local[d] = double(global.n[d]) / dims[d];
      }
      if (!ok) continue;
      const double area = local[0] * local[1] + local[1] * local[2] + local[0] * local[2];
      if (area < best_area) {
        best_area = area;
        best = dims;
      }
    }
  }
  if (best[0] == 0) {
    throw ConfigError("no decomposition of the grid over " + std::to_string(ranks) + " ranks");
  }
  return best;
}

std::string dims_to_string(std::array<int, 3> dims) {
  return std::to_string(dims[0]) + "x" + std::to_string(dims[1]) + "x" + std::to_string(dims[2]);
}

World::World(int size) : size_(size), slots_(std::size_t(size)) {
  if (size <= 0) throw ConfigError("rank count must be positive");
}

void World::wait(std::unique_lock<std::mutex>& lock, const std::function<bool()>& ready) {
  cv_.wait(lock, [&] { return aborted_ || ready(); });
  if (aborted_) throw AbortedError();
}

void World::send(int from, int to, int tag, std::vector<double> message) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (aborted_) throw AbortedError();
    mailboxes_[{from, to, tag}].push_back(std::move(message));
  }
  cv_.notify_all();
}

std::vector<double> World::recv(int to, int from, int tag) {
  std::unique_lock<std::mutex> lock(mutex_);
  auto& box = mailboxes_[{from, to, tag}];
  wait(lock, [&] { return !box.empty(); });
  std::vector<double> message = std::move(box.front());
  box.pop_front();
  return message;
}

void World::barrier() {
  std::unique_lock<std::mutex> lock(mutex_);
  if (aborted_) throw AbortedError();
  const long long generation = barrier_generation_;
  if (++barrier_count_ == size_) {
    barrier_count_ = 0;
    ++barrier_generation_;
    lock.unlock();
    cv_.notify_all();
    return;
  }
  wait(lock, [&] { return barrier_generation_ != generation; });
}

void World::abort() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    aborted_ = true;
  }
  cv_.notify_all();
}

bool World::aborted() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return aborted_;
}

std::vector<double> World::allreduce(int rank, const std::vector<double>& value, bool take_max) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    slots_[std::size_t(rank)] = value;
  }
  barrier();
  std::vector<double> result;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    result = slots_[0];
    for (int r = 1; r < size_; ++r) {
      const auto& other = slots_[std::size_t(r)];
      if (other.size() != result.size()) throw ProtocolError("allreduce length mismatch");
      for (std::size_t i = 0; i < result.size(); ++i) {
        result[i] = take_max ? std::max(result[i], other[i]) : result[i] + other[i];
      }
    }
  }
  // Nobody may overwrite a slot until every rank has read them all.
  barrier();
  return result;
}

double Communicator::allreduce_max(double value) { return world_->allreduce(rank_, {value}, true)[0]; }

std::vector<double> Communicator::allreduce_sum(const std::vector<double>& values) {
  return world_->allreduce(rank_, values, false);
}

void run_ranks(int size, const std::function<void(Communicator&)>& body) {
  World world(size);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(size));
  std::vector<std::thread> threads;
  threads.reserve(std::size_t(size));
  for (int r = 0; r < size; ++r) {
    threads.emplace_back([&, r] {
      Communicator comm(world, r);
      try {
        body(comm);
      } catch (...) {
        errors[std::size_t(r)] = std::current_exception();
        world.abort();
      }
    });
  }
  for (auto& t : threads) t.join();

  auto is_abort = [](const std::exception_ptr& e) {
    try {
      std::rethrow_exception(e);
    } catch (const AbortedError&) {
      return true;
    } catch (...) {
      return false;
    }
  };
  for (int r = 0; r < size; ++r) {
    const auto& e = errors[std::size_t(r)];
    if (e && !is_abort(e)) rethrow_with_rank(e, r);
  }
  for (int r = 0; r < size; ++r) {
    if (errors[std::size_t(r)]) rethrow_with_rank(errors[std::size_t(r)], r);
  }
}

std::size_t halo_message_size(const GridSpec& local, int dir, int num_vars) {
  const auto box = phase_box(local, dir);
  std::size_t area = 1;
  for (int d = 0; d < 3; ++d) {
    if (d != dir) area *= std::size_t(box[d][1] - box[d][0]);
  }
  return std::size_t(num_vars) * std::size_t(local.ghost) * area;
}

void halo_exchange(FieldSet& local, const RankLayout& layout, Communicator& comm, double* comm_seconds) {
  const GridSpec& s = local.spec();
  const int g = s.ghost;
  for (int d = 0; d < 3; ++d) {
    if (s.n[d] != layout.local_n[d]) throw ProtocolError("field does not match the rank layout");
  }
  for (int d = 0; d < 3; ++d) {
    const int n = s.n[d];
    const int minus = layout.neighbors[std::size_t(2 * d)];
    const int plus = layout.neighbors[std::size_t(2 * d + 1)];
    const int tag_to_minus = 2 * d;  // travels toward -d, lands in the receiver's + ghosts
    const int tag_to_plus = 2 * d + 1;
    std::vector<double> low = pack(local, d, 0, g);
    std::vector<double> high = pack(local, d, n - g, n);

    const auto start = Clock::now();
    comm.send(minus, tag_to_minus, std::move(low));
    comm.send(plus, tag_to_plus, std::move(high));
    std::vector<double> from_plus = comm.recv(plus, tag_to_minus);
    std::vector<double> from_minus = comm.recv(minus, tag_to_plus);
    if (comm_seconds) *comm_seconds += seconds_since(start);

    const std::size_t expected = halo_message_size(s, d, local.num_vars());
    if (from_plus.size() != expected || from_minus.size() != expected) {
      throw ProtocolError("halo message along dimension " + std::to_string(d) + " has " +
                          std::to_string(from_plus.size() != expected ? from_plus.size() : from_minus.size()) +
                          " values, expected " + std::to_string(expected));
    }
    unpack(local, d, n, n + g, from_plus);
    unpack(local, d, -g, 0, from_minus);
  }
}

FieldSet scatter(const FieldSet& global, const RankLayout& layout) {
  FieldSet local(global.spec().subgrid(layout.local_n), global.layout(), global.num_vars());
  const auto& o = layout.offset;
  for (int v = 0; v < global.num_vars(); ++v) {
    for_each_interior(local.spec(), [&](int i, int j, int k) {
      local(v, i, j, k) = global(v, o[0] + i, o[1] + j, o[2] + k);
    });
  }
  return local;
}

void gather_into(FieldSet& global, const FieldSet& local, const RankLayout& layout) {
  const auto& o = layout.offset;
  for (int v = 0; v < global.num_vars(); ++v) {
    for_each_interior(local.spec(), [&](int i, int j, int k) {
      global(v, o[0] + i, o[1] + j, o[2] + k) = local(v, i, j, k);
    });
  }
}

double TimingReport::ratio() const {
  const double busy = comm_seconds + comp_seconds;
  return busy > 0 ? comm_seconds / busy : 0.0;
}

ParallelResult parallel_advance(const FieldSet& u0, std::array<int, 3> dims, const TimeParams& params,
                                const SpatialOptions& options) {
  params.validate();
  const std::vector<RankLayout> layouts = decompose(u0.spec(), dims);
  const int size = int(layouts.size());

  ParallelResult result;
  result.state = FieldSet(u0.spec(), u0.layout(), u0.num_vars());
  result.timing.resize(std::size_t(size));
  std::mutex gather_mutex;

  const auto start = Clock::now();
  run_ranks(size, [&](Communicator& comm) {
    const RankLayout& layout = layouts[std::size_t(comm.rank())];
    TimingReport& timing = result.timing[std::size_t(comm.rank())];
    timing.rank = comm.rank();
    double comm_seconds = 0.0;

    AdvanceContext context;
    context.fill = [&](FieldSet& f) { halo_exchange(f, layout, comm, &comm_seconds); };
    context.reduce_max = [&](double x) {
      const auto t = Clock::now();
      const double r = comm.allreduce_max(x);
      comm_seconds += seconds_since(t);
      return r;
    };
    context.reduce_sum = [&](const Diagnostics& d) {
      const auto t = Clock::now();
      const auto r = comm.allreduce_sum({d.mass, d.momentum[0], d.momentum[1], d.momentum[2], d.energy});
      comm_seconds += seconds_since(t);
      Diagnostics out;
      out.mass = r[0];
      out.momentum = {r[1], r[2], r[3]};
      out.energy = r[4];
      return out;
    };

    const auto rank_start = Clock::now();
    AdvanceResult local = advance(scatter(u0, layout), params, options, {}, 0.0, context);
    timing.wall_seconds = seconds_since(rank_start);
    timing.comm_seconds = comm_seconds;
    timing.comp_seconds = local.compute_seconds;
    for (const auto& record : local.log) timing.step_wall.push_back(record.wall_seconds);

    std::lock_guard<std::mutex> lock(gather_mutex);
    gather_into(result.state, local.state, layout);
    if (comm.rank() == 0) {
      result.time = local.time;
      result.steps = local.steps;
      result.log = std::move(local.log);
    }
  });
  result.wall_seconds = seconds_since(start);
  fill_ghosts_periodic(result.state);
  return result;
}

ScalingRun summarize(const ParallelResult& result, std::array<int, 3> dims) {
  ScalingRun run;
  run.ranks = dims[0] * dims[1] * dims[2];
  run.dims = dims;
  run.wall = result.wall_seconds;
  for (const auto& t : result.timing) {
    run.comp = std::max(run.comp, t.comp_seconds);
    run.comm = std::max(run.comm, t.comm_seconds);
  }
  return run;
}

double comm_ratio(double comm, double wall) { return wall > 0 ? comm / wall : 0.0; }

std::string scaling_report(const std::vector<ScalingRun>& runs, ScalingMode mode) {
  std::ostringstream out;
  out << "ranks dims wall comp comm ratio speedup efficiency\n";
  if (runs.empty()) return out.str();
  const ScalingRun& base = runs.front();
  char line[256];
  for (const auto& r : runs) {
    const double scale = double(r.ranks) / double(base.ranks);
    double speedup, efficiency;
    if (mode == ScalingMode::Strong) {
      speedup = base.wall / r.wall;
      efficiency = speedup / scale;
    } else {
      efficiency = base.wall / r.wall;
      speedup = efficiency * scale;
    }
    std::snprintf(line, sizeof line, "%d %s %.6g %.6g %.6g %.4f %.4f %.4f\n", r.ranks, dims_to_string(r.dims).c_str(),
                  r.wall, r.comp, r.comm, comm_ratio(r.comm, r.wall), speedup, efficiency);
    out << line;
  }
  return out.str();
}

}  // namespace hitdns
