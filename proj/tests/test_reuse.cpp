#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>

#include "cori/error.hpp"
#include "cori/reuse.hpp"
#include "cori/trace.hpp"
#include "oracles.hpp"

using namespace cori;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "cori_reuse_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path path = temp_dir() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

std::map<std::uint64_t, std::uint64_t> as_map(const ReuseHistogram& hist) {
  std::map<std::uint64_t, std::uint64_t> m;
  for (const ReuseBin& bin : hist.bins) m[static_cast<std::uint64_t>(bin.reuse)] = bin.count;
  return m;
}

}  // namespace

TEST_CASE("strided reuse: every page sees the same gap") {
  const AccessTrace trace = generate_synthetic(SyntheticKind::strided, 4, 3);
  const ReuseHistogram hist = collect_reuse(trace, 1);
  REQUIRE(hist.bins.size() == 1);
  CHECK(hist.bins[0].reuse == 3.0);   // 3 other-page accesses between visits
  CHECK(hist.bins[0].count == 8);     // 2 pairs per page, 4 pages
  CHECK(hist.total_observations == 8);
  CHECK(hist.domain == ReuseDomain::requests);
}

TEST_CASE("repeated single page gives reuse zero") {
  const AccessTrace trace = canonicalize_trace(std::vector<std::uint64_t>(10, 5), 4096);
  const ReuseHistogram hist = collect_reuse(trace, 1);
  REQUIRE(hist.bins.size() == 1);
  CHECK(hist.bins[0].reuse == 0.0);
  CHECK(hist.bins[0].count == 9);
}

TEST_CASE("marker page over fresh regions: 16 strides give 15 appearances at the gap") {
  // One page revisited at the head of 16 strides; each stride body touches
  // 20000 pages never seen again. Only the marker produces reuse pairs, all
  // exactly at the body length.
  std::vector<std::uint64_t> raw;
  std::uint64_t fresh = 1;
  for (int stride = 0; stride < 16; ++stride) {
    raw.push_back(0);
    for (int i = 0; i < 20000; ++i) raw.push_back(fresh++);
  }
  const AccessTrace trace = canonicalize_trace(raw, 4096);
  const ReuseHistogram hist = collect_reuse(trace, 1000);
  REQUIRE(hist.bins.size() == 1);
  CHECK(hist.bins[0].reuse == 20000.0);
  CHECK(hist.bins[0].count == 15);
}

TEST_CASE("linear collection matches the quadratic oracle") {
  int case_index = 0;
  for (const auto& [kind, pages, repeats] :
       {std::tuple{SyntheticKind::random_uniform, 50u, 40u},
        std::tuple{SyntheticKind::strided, 37u, 11u},
        std::tuple{SyntheticKind::triangular, 60u, 25u},
        std::tuple{SyntheticKind::cyclic_phases, 24u, 7u}}) {
    for (const std::uint64_t bin_width : {1ull, 7ull, 100ull}) {
      const AccessTrace trace = generate_synthetic(kind, pages, repeats, 1000 + case_index);
      const ReuseHistogram hist = collect_reuse(trace, bin_width);
      CHECK(as_map(hist) == oracle::brute_force_reuse(trace, bin_width));
      ++case_index;
    }
  }
}

TEST_CASE("total observations equal visit pairs") {
  const AccessTrace trace = generate_synthetic(SyntheticKind::random_uniform, 40, 50, 9);
  std::map<PageId, std::uint64_t> visits;
  for (PageId p : trace.accesses) ++visits[p];
  std::uint64_t expected = 0;
  for (const auto& [page, count] : visits) expected += count > 0 ? count - 1 : 0;
  CHECK(collect_reuse(trace, 1).total_observations == expected);
}

TEST_CASE("doubling the bin width aggregates bins exactly") {
  const AccessTrace trace = generate_synthetic(SyntheticKind::random_uniform, 80, 60, 21);
  for (const std::uint64_t w : {1ull, 3ull, 16ull}) {
    const ReuseHistogram fine = collect_reuse(trace, w);
    const ReuseHistogram coarse = collect_reuse(trace, 2 * w);
    std::map<std::uint64_t, std::uint64_t> aggregated;
    for (const ReuseBin& bin : fine.bins) {
      const auto v = static_cast<std::uint64_t>(bin.reuse);
      aggregated[v / (2 * w) * (2 * w)] += bin.count;
    }
    CHECK(as_map(coarse) == aggregated);
  }
}

TEST_CASE("collect_reuse rejects bad inputs") {
  CHECK_THROWS_AS(collect_reuse(AccessTrace{}, 1), InvalidArgument);
  const AccessTrace trace = generate_synthetic(SyntheticKind::strided, 2, 2);
  CHECK_THROWS_AS(collect_reuse(trace, 0), InvalidArgument);
}

TEST_CASE("loop histogram import") {
  const fs::path single = write_file("loops_single.csv", "duration_seconds,count\n1.0,15\n");
  const ReuseHistogram hist = import_loop_histogram(single);
  CHECK(hist.domain == ReuseDomain::seconds);
  REQUIRE(hist.bins.size() == 1);
  CHECK(hist.bins[0].reuse == 1.0);
  CHECK(hist.bins[0].count == 15);

  const fs::path dup = write_file("loops_dup.csv",
                                  "duration_seconds,count\n0.5,3\n0.9,1\n0.5,2\n");
  const ReuseHistogram merged = import_loop_histogram(dup);
  REQUIRE(merged.bins.size() == 2);
  CHECK(merged.bins[0].reuse == 0.5);
  CHECK(merged.bins[0].count == 5);
  CHECK(merged.bins[1].reuse == 0.9);
  CHECK(merged.total_observations == 6);

  const fs::path bad = write_file("loops_bad.csv", "duration_seconds,count\nabc,3\n");
  CHECK_THROWS_WITH_AS(import_loop_histogram(bad), doctest::Contains(":2:"), ParseError);
  CHECK_THROWS_AS(import_loop_histogram(temp_dir() / "missing.csv"), FileError);
}

TEST_CASE("triangular-style loop profile keeps its decreasing shape") {
  const fs::path path = write_file(
      "loops_tri.csv", "duration_seconds,count\n0.1,12\n0.2,9\n0.3,7\n0.4,4\n0.5,2\n");
  const ReuseHistogram hist = import_loop_histogram(path);
  REQUIRE(hist.bins.size() == 5);
  for (std::size_t i = 1; i < hist.bins.size(); ++i) {
    CHECK(hist.bins[i].reuse > hist.bins[i - 1].reuse);
    CHECK(hist.bins[i].count < hist.bins[i - 1].count);
  }
}

TEST_CASE("histogram CSV round-trip keeps bins and domain") {
  const AccessTrace trace = generate_synthetic(SyntheticKind::random_uniform, 30, 40, 5);
  const ReuseHistogram hist = collect_reuse(trace, 10);
  const fs::path path = temp_dir() / "hist_roundtrip.csv";
  save_histogram_csv(hist, path);
  const ReuseHistogram reloaded = load_histogram_csv(path);
  CHECK(reloaded.domain == hist.domain);
  CHECK(as_map(reloaded) == as_map(hist));
  CHECK(reloaded.total_observations == hist.total_observations);

  // Loop CSVs load through the same reader with the seconds domain.
  const fs::path loops = write_file("loops_reload.csv", "duration_seconds,count\n0.25,4\n");
  CHECK(load_histogram_csv(loops).domain == ReuseDomain::seconds);
}
