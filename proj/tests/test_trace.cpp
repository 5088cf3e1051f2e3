#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cori/error.hpp"
#include "cori/trace.hpp"
#include "oracles.hpp"

using namespace cori;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "cori_trace_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path path = temp_dir() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("hex-address loading shifts addresses into pages") {
  const fs::path path = write_file("hex_basic.hex", "0x1000\n0x1FFF\n0x2000\n");
  const AccessTrace trace = load_trace(path, TraceFormat::hex_address);
  CHECK(trace.accesses == std::vector<PageId>{0, 0, 1});
  CHECK(trace.footprint_pages == 2);
  CHECK(trace.original_page_ids == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("page-csv loading renumbers pages by first appearance") {
  const fs::path path = write_file("csv_basic.csv", "index,page\n0,7\n1,7\n2,3\n");
  const AccessTrace trace = load_trace(path, TraceFormat::page_csv);
  CHECK(trace.accesses == std::vector<PageId>{0, 0, 1});
  CHECK(trace.footprint_pages == 2);
  CHECK(trace.original_page_ids == std::vector<std::uint64_t>{7, 3});
}

TEST_CASE("trace loading errors") {
  CHECK_THROWS_AS(load_trace(temp_dir() / "missing.hex", TraceFormat::hex_address), FileError);

  const fs::path empty = write_file("empty.hex", "");
  CHECK_THROWS_AS(load_trace(empty, TraceFormat::hex_address), Error);

  const fs::path bad_hex = write_file("bad.hex", "0x1000\nnot-an-address\n");
  CHECK_THROWS_WITH_AS(load_trace(bad_hex, TraceFormat::hex_address),
                       doctest::Contains(":2:"), ParseError);

  const fs::path bad_header = write_file("bad_header.csv", "page,index\n0,1\n");
  CHECK_THROWS_AS(load_trace(bad_header, TraceFormat::page_csv), ParseError);

  const fs::path bad_index = write_file("bad_index.csv", "index,page\n0,1\n2,1\n");
  CHECK_THROWS_WITH_AS(load_trace(bad_index, TraceFormat::page_csv),
                       doctest::Contains(":3:"), ParseError);
}

TEST_CASE("100k-access fixture round-trips bit-identically") {
  const AccessTrace trace = generate_synthetic(SyntheticKind::random_uniform, 500, 200, 11);
  REQUIRE(trace.total_requests() == 100000);

  for (const TraceFormat format : {TraceFormat::page_csv, TraceFormat::hex_address}) {
    const fs::path first = temp_dir() / (std::string("roundtrip_a_") + trace_format_name(format));
    const fs::path second = temp_dir() / (std::string("roundtrip_b_") + trace_format_name(format));
    save_trace(trace, first, format);
    const AccessTrace reloaded = load_trace(first, format);
    CHECK(reloaded.accesses == trace.accesses);
    CHECK(reloaded.footprint_pages == trace.footprint_pages);

    // Canonicalization is idempotent: a second save/load changes nothing.
    save_trace(reloaded, second, format);
    std::ifstream a(first), b(second);
    const std::string bytes_a((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string bytes_b((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(bytes_a == bytes_b);
  }
}

TEST_CASE("strided generation is a plain round-robin") {
  const AccessTrace trace = generate_synthetic(SyntheticKind::strided, 4, 3);
  CHECK(trace.accesses == std::vector<PageId>{0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3});
}

TEST_CASE("triangular generation shrinks each pass") {
  const AccessTrace trace = generate_synthetic(SyntheticKind::triangular, 3, 3);
  CHECK(trace.accesses == std::vector<PageId>{0, 1, 2, 0, 1, 0});
  CHECK_THROWS_AS(generate_synthetic(SyntheticKind::triangular, 3, 4), InvalidArgument);
}

TEST_CASE("random generation matches the pinned recurrence") {
  const AccessTrace trace = generate_synthetic(SyntheticKind::random_uniform, 100, 100, 42);
  REQUIRE(trace.total_requests() == 10000);

  oracle::ReferenceRng rng(42);
  std::vector<std::uint64_t> raw;
  raw.reserve(10000);
  for (int i = 0; i < 10000; ++i) raw.push_back(rng.next_below(100));
  const std::vector<std::uint32_t> expected = oracle::renumber(raw);
  CHECK(trace.accesses == std::vector<PageId>(expected.begin(), expected.end()));

  // Pure function of its arguments.
  const AccessTrace again = generate_synthetic(SyntheticKind::random_uniform, 100, 100, 42);
  CHECK(again.accesses == trace.accesses);
  const AccessTrace other_seed = generate_synthetic(SyntheticKind::random_uniform, 100, 100, 43);
  CHECK(other_seed.accesses != trace.accesses);
}

TEST_CASE("cyclic-phases alternates disjoint working sets") {
  const AccessTrace trace = generate_synthetic(SyntheticKind::cyclic_phases, 4, 2);
  REQUIRE(trace.total_requests() == 2 * kCyclicSweepsPerPhase * 2);
  for (std::size_t i = 0; i < kCyclicSweepsPerPhase * 2; ++i) {
    CHECK(trace.accesses[i] < 2);                              // phase 0: pages {0,1}
    CHECK(trace.accesses[kCyclicSweepsPerPhase * 2 + i] >= 2); // phase 1: pages {2,3}
  }
  CHECK_THROWS_AS(generate_synthetic(SyntheticKind::cyclic_phases, 1, 2), InvalidArgument);
}

TEST_CASE("strided traces touch every page exactly repeats times") {
  for (const std::uint32_t pages : {1u, 7u, 64u}) {
    for (const std::uint32_t repeats : {1u, 5u}) {
      const AccessTrace trace = generate_synthetic(SyntheticKind::strided, pages, repeats);
      std::map<PageId, std::uint32_t> counts;
      for (PageId p : trace.accesses) ++counts[p];
      CHECK(counts.size() == pages);
      for (const auto& [page, count] : counts) CHECK(count == repeats);
    }
  }
}

TEST_CASE("compute_stats totals") {
  const AccessTrace strided = generate_synthetic(SyntheticKind::strided, 4, 3);
  const TraceStats stats = compute_stats(strided);
  CHECK(stats.total_requests == 12);
  CHECK(stats.distinct_pages == 4);
  CHECK(stats.footprint_bytes == 4 * 4096);

  const AccessTrace single = canonicalize_trace(std::vector<std::uint64_t>(10, 99), 4096);
  const TraceStats single_stats = compute_stats(single);
  CHECK(single_stats.total_requests == 10);
  CHECK(single_stats.distinct_pages == 1);
  CHECK(single_stats.footprint_bytes == 4096);

  CHECK_THROWS_AS(compute_stats(AccessTrace{}), InvalidArgument);
}

TEST_CASE("compute_stats of a saved fixture matches its line count") {
  const AccessTrace trace = generate_synthetic(SyntheticKind::random_uniform, 300, 100, 3);
  const fs::path path = temp_dir() / "line_count.csv";
  save_trace(trace, path, TraceFormat::page_csv);

  std::ifstream in(path);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;

  const TraceStats stats = compute_stats(load_trace(path, TraceFormat::page_csv));
  CHECK(stats.total_requests == lines - 1);  // header row
  CHECK(stats.total_requests == trace.total_requests());
}

TEST_CASE("synthetic spec grammar") {
  auto spec = try_parse_synthetic_spec("strided:4x3");
  REQUIRE(spec.has_value());
  CHECK(spec->kind == SyntheticKind::strided);
  CHECK(spec->pages == 4);
  CHECK(spec->repeats == 3);
  CHECK(!spec->seed.has_value());

  spec = try_parse_synthetic_spec("random:100x100:42");
  REQUIRE(spec.has_value());
  CHECK(spec->kind == SyntheticKind::random_uniform);
  CHECK(spec->seed == 42);

  CHECK(!try_parse_synthetic_spec("traces/foo.csv").has_value());
  CHECK(!try_parse_synthetic_spec("strided:4").has_value());
  CHECK(!try_parse_synthetic_spec("unknown:4x3").has_value());
}

TEST_CASE("format detection sniffs the first line") {
  const fs::path hex = write_file("detect.hex", "0x2000\n");
  const fs::path csv = write_file("detect.csv", "index,page\n0,1\n");
  CHECK(detect_trace_format(hex) == TraceFormat::hex_address);
  CHECK(detect_trace_format(csv) == TraceFormat::page_csv);
  const fs::path junk = write_file("detect.txt", "hello\n");
  CHECK_THROWS_AS(detect_trace_format(junk), Error);
}
