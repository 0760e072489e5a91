#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hitdns/grid.hpp"
#include "hitdns/weno.hpp"

namespace hitdns {

/// Visiting order of the interface points of the weights kernel.
struct Traversal {
  enum class Kind { Lexicographic, Tiled };
  Kind kind = Kind::Lexicographic;
  int tile_x = 32;
  int tile_y = 8;

  static Traversal lexicographic() { return {}; }
  static Traversal tiled(int tx, int ty) { return {Kind::Tiled, tx, ty}; }
  /// "lexicographic" or "tiled32x8"
  std::string name() const;
};

/// Deterministic pseudo-random 5-variable field on n^3 with ghosts filled.
/// Values depend only on (seed, variable, point), not on the layout.
FieldSet make_bench_field(int n, Layout layout, std::uint64_t seed = 7);

/// Lane counts of one kernel pass. Tiles that overhang the domain visit
/// masked lanes that do no work.
struct LaneCount {
  long long active = 0;
  long long masked = 0;
};

/// Nonlinear weights of the left-biased x stencil at every x interface
/// i+1/2, i in [-1, n-1], of every interior (j, k) line, for all five
/// variables. `omega` is resized to 15 values per interface, ordered
/// (k, j, i, var, stencil) whatever the layout or traversal, so outputs are
/// comparable bitwise.
LaneCount weights_kernel(const FieldSet& field, const Traversal& traversal, const WenoParams& params,
                         std::vector<double>& omega, int workers = 1);

struct BenchRecord {
  int n = 0;
  Layout layout = Layout::Interleaved;
  Traversal traversal;
  std::vector<double> seconds;  ///< one entry per repeat
  double min_seconds = 0.0;
  double median_seconds = 0.0;
  double cv = 0.0;  ///< standard deviation / mean of the repeats
  double bytes = 0.0;
  double bandwidth_gbs = 0.0;  ///< bytes / median_seconds / 1e9
  LaneCount lanes;
};

/// Each active interface reads 25 stencil values and writes 15 weights,
/// 8 bytes apiece.
double bytes_touched(const LaneCount& lanes);

/// Times `repeats` (>= 3) passes of the weights kernel. Throws ConfigError
/// for fewer repeats or nonpositive n.
BenchRecord bench_weights_kernel(int n, Layout layout, const Traversal& traversal, int repeats = 5, int workers = 1);

/// Every n in `sizes` for both layouts and every traversal given.
std::vector<BenchRecord> layout_sweep(const std::vector<int>& sizes, const std::vector<Traversal>& traversals,
                                      int repeats = 5, int workers = 1);

/// Columns `n layout traversal median_s bandwidth_GBs ratio_vs_baseline cv`,
/// figures to 3 significant digits. The baseline of each n is the
/// Interleaved/lexicographic record, or the first record of that n if absent;
/// ratio = baseline median / median.
std::string layout_report(const std::vector<BenchRecord>& records);

void write_layout_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace hitdns
