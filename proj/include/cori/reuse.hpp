#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cori/trace.hpp"

namespace cori {

enum class ReuseDomain { requests, seconds };

struct ReuseBin {
  double reuse = 0.0;         // bin value in domain units (bin lower edge)
  std::uint64_t count = 0;
};

// Histogram of page reuse values: how many requests to other pages fall
// between two consecutive accesses to the same page (requests domain), or
// imported loop durations (seconds domain). Bins are strictly ascending and
// every count is >= 1.
struct ReuseHistogram {
  std::vector<ReuseBin> bins;
  ReuseDomain domain = ReuseDomain::requests;
  std::uint64_t total_observations = 0;
};

// Scans the trace once with a last-seen index per page. For each consecutive
// access pair of a page the reuse is the number of intervening requests
// (identical back-to-back accesses give 0); reuses are binned to
// floor(reuse / bin_width) * bin_width.
ReuseHistogram collect_reuse(const AccessTrace& trace, std::uint64_t bin_width = 1000);

// Reads a "duration_seconds,count" CSV. Duplicate or unsorted durations are
// merged with summed counts; non-numeric fields raise a parse error naming
// the line.
ReuseHistogram import_loop_histogram(const std::filesystem::path& path);

// Two-column CSV with a "# domain=requests|seconds" comment line on top.
void save_histogram_csv(const ReuseHistogram& hist, const std::filesystem::path& path);

// Reads histograms written by save_histogram_csv as well as loop-duration
// CSVs (header "duration_seconds,count" implies the seconds domain).
ReuseHistogram load_histogram_csv(const std::filesystem::path& path);

const char* reuse_domain_name(ReuseDomain domain);

}  // namespace cori
