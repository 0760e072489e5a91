#include "hitdns/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "hitdns/errors.hpp"
#include "hitdns/parallel.hpp"

namespace hitdns {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline void interface_weights(const FieldSet& f, int i, int j, int k, const WenoParams& params, double* out) {
  const std::ptrdiff_t ps = f.point_stride();
  const std::size_t p = f.spec().index(i, j, k);
  for (int v = 0; v < kNumConserved; ++v) {
    const double* c = f.data() + f.offset(v, p);
    const Stencil5<double> s(c[-2 * ps], c[-ps], c[0], c[ps], c[2 * ps]);
    const Eigen::Vector3d w = nonlinear_weights<double>(smoothness_indicators<double>(s), params);
    out[3 * v + 0] = w[0];
    out[3 * v + 1] = w[1];
    out[3 * v + 2] = w[2];
  }
}

std::string format3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

std::string Traversal::name() const {
  if (kind == Kind::Lexicographic) return "lexicographic";
  return "tiled" + std::to_string(tile_x) + "x" + std::to_string(tile_y);
}

FieldSet make_bench_field(int n, Layout layout, std::uint64_t seed) {
  FieldSet f(GridSpec::cube(n), layout);
  const std::uint64_t base = mix(seed);
  for (int v = 0; v < kNumConserved; ++v) {
    for_each_interior(f.spec(), [&](int i, int j, int k) {
      const std::uint64_t key = ((std::uint64_t(v) * std::uint64_t(n) + std::uint64_t(k)) * std::uint64_t(n) +
                                 std::uint64_t(j)) * std::uint64_t(n) + std::uint64_t(i);
      f(v, i, j, k) = 1.0 + double(mix(base ^ key) >> 11) * 0x1.0p-53;
    });
  }
  fill_ghosts_periodic(f);
  return f;
}

LaneCount weights_kernel(const FieldSet& field, const Traversal& traversal, const WenoParams& params,
                         std::vector<double>& omega, int workers) {
  if (field.num_vars() != kNumConserved) throw BoundsError("weights kernel expects 5 variables");
  const GridSpec& s = field.spec();
  const int nx = s.n[0] + 1;  // interfaces per line
  const int ny = s.n[1];
  const int nz = s.n[2];
  omega.resize(std::size_t(nx) * ny * nz * 15);
  double* out = omega.data();
  auto slot = [&](int ii, int j, int k) { return out + ((std::size_t(k) * ny + j) * nx + ii) * 15; };

  std::vector<LaneCount> per_plane(static_cast<std::size_t>(nz));
  parallel_for(nz, workers, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    for (std::ptrdiff_t kk = begin; kk < end; ++kk) {
      const int k = int(kk);
      LaneCount& lanes = per_plane[std::size_t(k)];
      if (traversal.kind == Traversal::Kind::Lexicographic) {
        for (int j = 0; j < ny; ++j)
          for (int ii = 0; ii < nx; ++ii) interface_weights(field, ii - 1, j, k, params, slot(ii, j, k));
        lanes.active += std::int64_t(nx) * ny;
        continue;
      }
      const int tx = traversal.tile_x, ty = traversal.tile_y;
      for (int y0 = 0; y0 < ny; y0 += ty)
        for (int x0 = 0; x0 < nx; x0 += tx)
          for (int ly = 0; ly < ty; ++ly)
            for (int lx = 0; lx < tx; ++lx) {
              const int ii = x0 + lx, j = y0 + ly;
              if (ii >= nx || j >= ny) {
                ++lanes.masked;
                continue;
              }
              ++lanes.active;
              interface_weights(field, ii - 1, j, k, params, slot(ii, j, k));
            }
    }
  });
  LaneCount total;
  for (const auto& l : per_plane) {
    total.active += l.active;
    total.masked += l.masked;
  }
  return total;
}

double bytes_touched(const LaneCount& lanes) { return double(lanes.active) * (25.0 + 15.0) * 8.0; }

BenchRecord bench_weights_kernel(int n, Layout layout, const Traversal& traversal, int repeats, int workers) {
  if (repeats < 3) throw ConfigError("benchmark needs at least 3 repeats");
  if (n <= 0) throw ConfigError("benchmark grid size must be positive");
  if (traversal.kind == Traversal::Kind::Tiled && (traversal.tile_x <= 0 || traversal.tile_y <= 0)) {
    throw ConfigError("tile dimensions must be positive");
  }
  const FieldSet field = make_bench_field(n, layout);
  const WenoParams params;
  std::vector<double> omega;
  BenchRecord record;
  record.n = n;
  record.layout = layout;
  record.traversal = traversal;
  weights_kernel(field, traversal, params, omega, workers);  // warm-up: page in the output
  for (int r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    record.lanes = weights_kernel(field, traversal, params, omega, workers);
    record.seconds.push_back(std::chrono::duration<double>(Clock::now() - start).count());
  }
  std::vector<double> sorted = record.seconds;
  std::sort(sorted.begin(), sorted.end());
  record.min_seconds = sorted.front();
  const std::size_t m = sorted.size();
  record.median_seconds = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  double mean = 0.0;
  for (double t : sorted) mean += t;
  mean /= double(m);
  double var = 0.0;
  for (double t : sorted) var += (t - mean) * (t - mean);
  record.cv = mean > 0 ? std::sqrt(var / double(m)) / mean : 0.0;
  record.bytes = bytes_touched(record.lanes);
  record.bandwidth_gbs = record.median_seconds > 0 ? record.bytes / record.median_seconds / 1e9 : 0.0;
  return record;
}

std::vector<BenchRecord> layout_sweep(const std::vector<int>& sizes, const std::vector<Traversal>& traversals,
                                      int repeats, int workers) {
  std::vector<BenchRecord> records;
  for (int n : sizes)
    for (Layout layout : {Layout::Interleaved, Layout::ComponentContiguous})
      for (const auto& t : traversals) records.push_back(bench_weights_kernel(n, layout, t, repeats, workers));
  return records;
}

std::string layout_report(const std::vector<BenchRecord>& records) {
  std::map<int, double> baseline;
  for (const auto& r : records) {
    if (r.layout == Layout::Interleaved && r.traversal.kind == Traversal::Kind::Lexicographic) {
      baseline.emplace(r.n, r.median_seconds);
    }
  }
  for (const auto& r : records) baseline.emplace(r.n, r.median_seconds);

  std::ostringstream out;
  out << "n layout traversal median_s bandwidth_GBs ratio_vs_baseline cv\n";
  for (const auto& r : records) {
    const double ratio = r.median_seconds > 0 ? baseline[r.n] / r.median_seconds : 0.0;
    out << r.n << ' ' << to_string(r.layout) << ' ' << r.traversal.name() << ' ' << format3(r.median_seconds) << ' '
        << format3(r.bandwidth_gbs) << ' ' << format3(ratio) << ' ' << format3(r.cv) << '\n';
  }
  return out.str();
}

void write_layout_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "n,layout,traversal,repeats,min_s,median_s,cv,bytes,bandwidth_GBs,active_lanes,masked_lanes\n";
  out.precision(9);
  for (const auto& r : records) {
    out << r.n << ',' << to_string(r.layout) << ',' << r.traversal.name() << ',' << r.seconds.size() << ','
        << r.min_seconds << ',' << r.median_seconds << ',' << r.cv << ',' << r.bytes << ',' << r.bandwidth_gbs << ','
        << r.lanes.active << ',' << r.lanes.masked << '\n';
  }
}

}  // namespace hitdns
