#include <doctest.h>

#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "hitdns/bench.hpp"
#include "hitdns/errors.hpp"

using namespace hitdns;

TEST_SUITE("bench") {
  TEST_CASE("bench field does not depend on the layout") {
    const FieldSet a = make_bench_field(8, Layout::Interleaved);
    const FieldSet b = make_bench_field(8, Layout::ComponentContiguous);
    for_each_interior(a.spec(), [&](int i, int j, int k) {
      for (int v = 0; v < 5; ++v) {
        CHECK(a(v, i, j, k) == b(v, i, j, k));
        CHECK(a(v, i, j, k) >= 1.0);
        CHECK(a(v, i, j, k) < 2.0);
      }
    });
    CHECK(a(2, -1, 0, 0) == a(2, 7, 0, 0));
  }

  TEST_CASE("weights are identical across layouts, traversals and worker counts") {
    const int n = 16;
    std::vector<double> reference;
    const LaneCount lanes = weights_kernel(make_bench_field(n, Layout::Interleaved), Traversal::lexicographic(),
                                           WenoParams{}, reference);
    CHECK(lanes.active == (n + 1) * n * n);
    CHECK(lanes.masked == 0);
    CHECK(reference.size() == std::size_t(15 * (n + 1) * n * n));
    for (std::size_t m = 0; m < reference.size(); m += 3) {
      CHECK(reference[m] + reference[m + 1] + reference[m + 2] == doctest::Approx(1.0).epsilon(1e-15));
    }
    for (Layout layout : {Layout::Interleaved, Layout::ComponentContiguous})
      for (const Traversal& t : {Traversal::lexicographic(), Traversal::tiled(32, 8), Traversal::tiled(5, 3)})
        for (int workers : {1, 3}) {
          std::vector<double> omega;
          weights_kernel(make_bench_field(n, layout), t, WenoParams{}, omega, workers);
          REQUIRE(omega.size() == reference.size());
          CHECK(std::memcmp(omega.data(), reference.data(), omega.size() * sizeof(double)) == 0);
        }
  }

  TEST_CASE("tiles overhanging the domain count masked lanes") {
    // 65 interfaces by 64 lines per plane with 32x8 tiles: 3 x 8 tiles of
    // 256 lanes, 6144 lanes per plane for 4160 active ones.
    std::vector<double> omega;
    const LaneCount lanes =
        weights_kernel(make_bench_field(64, Layout::ComponentContiguous), Traversal::tiled(32, 8), WenoParams{}, omega);
    CHECK(lanes.active == 65LL * 64 * 64);
    CHECK(lanes.masked == (6144LL - 4160) * 64);
    CHECK(bytes_touched(lanes) == double(lanes.active) * 40 * 8);
  }

  TEST_CASE("traversal names") {
    CHECK(Traversal::lexicographic().name() == "lexicographic");
    CHECK(Traversal::tiled(32, 8).name() == "tiled32x8");
  }

  TEST_CASE("timing record") {
    const BenchRecord r = bench_weights_kernel(16, Layout::ComponentContiguous, Traversal::lexicographic(), 3);
    CHECK(r.n == 16);
    CHECK(r.seconds.size() == 3);
    CHECK(r.min_seconds > 0.0);
    CHECK(r.median_seconds >= r.min_seconds);
    CHECK(r.cv >= 0.0);
    CHECK(r.bandwidth_gbs == doctest::Approx(r.bytes / r.median_seconds / 1e9));
    CHECK_THROWS_AS(bench_weights_kernel(16, Layout::Interleaved, Traversal::lexicographic(), 2), ConfigError);
    CHECK_THROWS_AS(bench_weights_kernel(0, Layout::Interleaved, Traversal::lexicographic(), 3), ConfigError);
  }

  TEST_CASE("report against the interleaved lexicographic baseline") {
    std::vector<BenchRecord> records(2);
    records[0].n = 32;
    records[0].layout = Layout::Interleaved;
    records[0].median_seconds = 0.002;
    records[0].bandwidth_gbs = 1.23456;
    records[1].n = 32;
    records[1].layout = Layout::ComponentContiguous;
    records[1].median_seconds = 0.001;
    records[1].bandwidth_gbs = 2.46912;
    std::istringstream in(layout_report(records));
    std::string header, row0, row1;
    std::getline(in, header);
    std::getline(in, row0);
    std::getline(in, row1);
    CHECK(header == "n layout traversal median_s bandwidth_GBs ratio_vs_baseline cv");
    CHECK(row0 == "32 Interleaved lexicographic 0.002 1.23 1 0");
    CHECK(row1 == "32 ComponentContiguous lexicographic 0.001 2.47 2 0");

    std::ostringstream csv;
    write_layout_csv(csv, records);
    CHECK(csv.str().find("32,ComponentContiguous,lexicographic") != std::string::npos);
  }
}
