#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cori {

using PageId = std::uint32_t;

enum class TraceFormat { hex_address, page_csv };

enum class SyntheticKind { strided, triangular, random_uniform, cyclic_phases };

// Page-granular memory access sequence. Pages are always canonical: dense ids
// assigned in first-appearance order, so every id is < footprint_pages and
// capacity accounting can use plain vectors. original_page_ids maps a
// canonical id back to the id seen in the source (address >> page shift for
// hex traces, the raw page column for CSV traces, the pre-renumbering id for
// synthetic ones).
struct AccessTrace {
  std::vector<PageId> accesses;
  std::uint64_t page_size_bytes = 4096;
  std::uint32_t footprint_pages = 0;
  std::vector<std::uint64_t> original_page_ids;

  bool empty() const { return accesses.empty(); }
  std::uint64_t total_requests() const { return accesses.size(); }
};

struct TraceStats {
  std::uint64_t total_requests = 0;
  std::uint32_t distinct_pages = 0;
  std::uint64_t footprint_bytes = 0;
};

// Synthetic trace request, e.g. parsed from the "kind:PxR[:seed]" grammar.
struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::strided;
  std::uint32_t pages = 1;
  std::uint32_t repeats = 1;
  std::optional<std::uint64_t> seed;
};

// Number of round-robin sweeps a cyclic-phases working set performs before
// the trace switches to the other half. High enough that promoting a phase's
// pages can amortize the page-copy traffic of the swap.
inline constexpr std::uint32_t kCyclicSweepsPerPhase = 16;

AccessTrace canonicalize_trace(const std::vector<std::uint64_t>& raw_ids,
                               std::uint64_t page_size_bytes = 4096);

// Formats:
//   hex-address : one 0x-prefixed lowercase hex virtual address per line (LF);
//                 PageId = address / page_size_bytes.
//   page-csv    : header "index,page", then decimal rows with the index
//                 strictly increasing from 0.
AccessTrace load_trace(const std::filesystem::path& path, TraceFormat format,
                       std::uint64_t page_size_bytes = 4096);
void save_trace(const AccessTrace& trace, const std::filesystem::path& path,
                TraceFormat format);

// Writes "canonical_page,original_page" rows for a loaded trace.
void save_page_mapping(const AccessTrace& trace, const std::filesystem::path& path);

// Deterministic function of its arguments (seed drives the pinned xorshift64*
// generator, see rng.hpp). Patterns:
//   strided       - pages 0..P-1 visited round-robin, `repeats` full passes.
//   triangular    - pass k visits pages 0..P-1-k; requires repeats <= pages.
//   random        - pages*repeats i.i.d. uniform draws from [0, P).
//   cyclic-phases - `repeats` phases alternating between the two halves of the
//                   page range; each phase sweeps its half
//                   kCyclicSweepsPerPhase times. Requires P >= 2.
AccessTrace generate_synthetic(SyntheticKind kind, std::uint32_t pages,
                               std::uint32_t repeats, std::uint64_t seed = 0);

TraceStats compute_stats(const AccessTrace& trace);

TraceFormat parse_trace_format(const std::string& name);
const char* trace_format_name(TraceFormat format);
SyntheticKind parse_synthetic_kind(const std::string& name);
const char* synthetic_kind_name(SyntheticKind kind);

// Parses "kind:PxR" or "kind:PxR:seed"; returns nullopt when the string does
// not match the grammar (callers then treat it as a file path).
std::optional<SyntheticSpec> try_parse_synthetic_spec(const std::string& text);

// Sniffs hex-address vs page-csv from the first line of the file.
TraceFormat detect_trace_format(const std::filesystem::path& path);

}  // namespace cori
