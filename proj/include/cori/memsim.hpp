#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cori/trace.hpp"

namespace cori {

struct SchedulerSpec;  // scheduler.hpp

// Bytes transferred per memory request (cache-line sized payload).
inline constexpr std::uint64_t kRequestBytes = 64;

// Flat two-tier memory model. Latency and bandwidth of the slow tier are
// expressed relative to the fast tier. The default bandwidth makes a uniform
// all-fast request stream use 50% of the fast tier, so queueing shows up only
// under migration bursts or slow-memory pressure.
struct HybridMemoryConfig {
  double fast_capacity_fraction = 0.20;   // fraction of the footprint in fast memory
  double fast_latency_ns = 100.0;         // per-request latency of the fast tier
  double slow_latency_multiplier = 3.0;   // slow latency = fast latency * this
  double fast_bandwidth_bytes_per_s = 1.28e9;
  double slow_bandwidth_fraction = 0.37;  // slow bandwidth = fast bandwidth * this
  double per_migration_delay_ns = 3000.0; // constant cost per page swap
  double per_period_overhead_ns = 5000.0; // scheduler cost at each period start
  double requests_per_second = 10000.0;   // request-count <-> seconds mapping
  double migration_overlap_fraction = 0.0; // fraction of swap cost hidden by async copy

  void validate() const;  // throws InvalidArgument naming the offending field
};

enum class Location : std::uint8_t { fast, slow };

// Which tier each page lives in, plus the recency clock used to pick LRU
// victims. lru_clock holds the last-access request index (-1 = never).
struct PlacementMap {
  std::vector<Location> location;
  std::vector<std::int64_t> lru_clock;
  std::uint64_t capacity_pages = 0;
  std::uint64_t fast_pages = 0;

  bool is_fast(PageId page) const { return location[page] == Location::fast; }

  // Swap semantics: promote must be slow-resident and demote fast-resident;
  // fast occupancy is conserved. Throws InvalidArgument otherwise.
  void swap_pair(PageId promote, PageId demote);
};

struct PeriodRecord {
  std::uint64_t index = 0;
  std::uint64_t requests = 0;
  std::uint64_t fast_hits = 0;
  std::uint64_t migrations = 0;
  std::uint64_t fast_pages_end = 0;   // fast-resident pages after this period
  std::uint64_t total_pages = 0;      // recounted each period (conservation check)
  double runtime_ns = 0.0;            // wall share of this period
};

struct SimResult {
  double runtime_ns = 0.0;
  double access_time_ns = 0.0;
  double bandwidth_delay_ns = 0.0;
  double migration_time_ns = 0.0;     // raw sum, before the overlap discount
  double period_overhead_ns = 0.0;
  std::uint64_t migrations = 0;
  std::uint64_t bytes_moved = 0;      // migrations * 2 * page_size
  double fast_hit_fraction = 0.0;
  std::uint64_t capacity_pages = 0;
  std::uint32_t footprint_pages = 0;
  std::vector<PeriodRecord> per_period_log;
};

// Interleaved initial placement: with fast fraction f <= 0.5 every
// round(1/f)-th page starts fast; for f > 0.5 the rule is applied to the slow
// pages instead. Occupancy is then truncated to floor(f * footprint).
PlacementMap initial_placement(const TraceStats& stats, const HybridMemoryConfig& config);

// Replays the trace against the two-tier model. Each period boundary charges
// the period overhead, runs the scheduler, applies the resulting swaps
// (charging the per-swap constant and pushing the page bytes through both
// bandwidth queues), then services the period's requests. Each memory is a
// FIFO service queue: a request waits until the queue is free, occupies it
// for request_bytes/bandwidth, and completes after its latency. Waiting time
// accumulates into bandwidth_delay_ns.
//
// runtime_ns = access_time_ns + bandwidth_delay_ns
//            + (1 - migration_overlap_fraction) * migration_time_ns
//            + period_overhead_ns
SimResult simulate(const AccessTrace& trace, const HybridMemoryConfig& config,
                   const SchedulerSpec& scheduler, std::uint64_t period_requests);

// Ideal baseline: everything fast, single period, no scheduler or overheads.
double all_fast_runtime(const AccessTrace& trace, const HybridMemoryConfig& config);

void write_sim_result_csv(const SimResult& result, const std::filesystem::path& path);
void write_period_log_csv(const SimResult& result, const std::filesystem::path& path);

}  // namespace cori
