#include "cori/memsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>

#include "cori/config_io.hpp"
#include "cori/error.hpp"
#include "cori/scheduler.hpp"

namespace cori {

void HybridMemoryConfig::validate() const {
  if (!(fast_capacity_fraction > 0.0) || fast_capacity_fraction > 1.0) {
    throw InvalidArgument("config: fast_capacity_fraction must be in (0, 1]");
  }
  if (!(fast_latency_ns > 0.0)) throw InvalidArgument("config: fast_latency_ns must be > 0");
  if (slow_latency_multiplier < 1.0) {
    throw InvalidArgument("config: slow_latency_multiplier must be >= 1");
  }
  if (!(fast_bandwidth_bytes_per_s > 0.0)) {
    throw InvalidArgument("config: fast_bandwidth_bytes_per_s must be > 0");
  }
  if (!(slow_bandwidth_fraction > 0.0) || slow_bandwidth_fraction > 1.0) {
    throw InvalidArgument("config: slow_bandwidth_fraction must be in (0, 1]");
  }
  if (per_migration_delay_ns < 0.0) throw InvalidArgument("config: per_migration_delay_ns must be >= 0");
  if (per_period_overhead_ns < 0.0) throw InvalidArgument("config: per_period_overhead_ns must be >= 0");
  if (!(requests_per_second > 0.0)) throw InvalidArgument("config: requests_per_second must be > 0");
  if (migration_overlap_fraction < 0.0 || migration_overlap_fraction > 1.0) {
    throw InvalidArgument("config: migration_overlap_fraction must be in [0, 1]");
  }
}

void PlacementMap::swap_pair(PageId promote, PageId demote) {
  if (promote == demote) throw InvalidArgument("swap_pair: promote and demote are the same page");
  if (location[promote] != Location::slow) {
    throw InvalidArgument("swap_pair: promote page is not slow-resident");
  }
  if (location[demote] != Location::fast) {
    throw InvalidArgument("swap_pair: demote page is not fast-resident");
  }
  location[promote] = Location::fast;
  location[demote] = Location::slow;
}

PlacementMap initial_placement(const TraceStats& stats, const HybridMemoryConfig& config) {
  config.validate();
  if (stats.distinct_pages == 0) throw InvalidArgument("initial_placement: trace has no pages");

  const std::uint32_t footprint = stats.distinct_pages;
  const double fraction = config.fast_capacity_fraction;
  const auto capacity = static_cast<std::uint64_t>(std::floor(fraction * footprint + 1e-9));

  PlacementMap placement;
  placement.capacity_pages = capacity;
  placement.lru_clock.assign(footprint, -1);

  if (fraction >= 1.0 - 1e-12) {
    placement.location.assign(footprint, Location::fast);
    placement.fast_pages = footprint;
    return placement;
  }

  placement.location.assign(footprint, Location::slow);
  std::uint64_t fast_count = 0;
  if (fraction <= 0.5) {
    const auto k = std::max<std::uint64_t>(2, std::llround(1.0 / fraction));
    for (std::uint32_t i = 0; i < footprint; ++i) {
      if (i % k == 0) {
        placement.location[i] = Location::fast;
        ++fast_count;
      }
    }
  } else {
    const auto k = std::max<std::uint64_t>(2, std::llround(1.0 / (1.0 - fraction)));
    for (std::uint32_t i = 0; i < footprint; ++i) {
      if (i % k != 0) {
        placement.location[i] = Location::fast;
        ++fast_count;
      }
    }
  }

  // The interleave rule can overshoot by a page or two for awkward fractions;
  // capacity is a hard bound, so demote the highest ids back.
  for (std::uint32_t i = footprint; i-- > 0 && fast_count > capacity;) {
    if (placement.location[i] == Location::fast) {
      placement.location[i] = Location::slow;
      --fast_count;
    }
  }

  placement.fast_pages = fast_count;
  return placement;
}

SimResult simulate(const AccessTrace& trace, const HybridMemoryConfig& config,
                   const SchedulerSpec& scheduler, std::uint64_t period_requests) {
  config.validate();
  scheduler.validate();
  if (trace.empty()) throw InvalidArgument("simulate: trace is empty");
  const std::uint64_t total = trace.total_requests();
  if (period_requests < 1 || period_requests > total) {
    throw InvalidArgument("simulate: period_requests must be in [1, " + std::to_string(total) +
                          "], got " + std::to_string(period_requests));
  }

  const std::uint32_t footprint = trace.footprint_pages;
  PlacementMap placement = initial_placement(compute_stats(trace), config);
  const std::uint64_t capacity = placement.capacity_pages;
  const std::uint64_t n_periods = (total + period_requests - 1) / period_requests;

  // ns per byte of each tier; index 0 = fast, 1 = slow.
  const double ns_per_byte[2] = {
      1e9 / config.fast_bandwidth_bytes_per_s,
      1e9 / (config.fast_bandwidth_bytes_per_s * config.slow_bandwidth_fraction)};
  const double request_service_ns[2] = {kRequestBytes * ns_per_byte[0],
                                        kRequestBytes * ns_per_byte[1]};
  const double latency_ns[2] = {config.fast_latency_ns,
                                config.fast_latency_ns * config.slow_latency_multiplier};
  // One swap reads and writes one page on each memory.
  const double swap_bytes_per_memory = 2.0 * static_cast<double>(trace.page_size_bytes);

  double clock = 0.0;
  double queue_free[2] = {0.0, 0.0};
  double access_time = 0.0;
  double bandwidth_delay = 0.0;
  double migration_raw = 0.0;
  double period_overhead = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t migrations = 0;

  const bool reactive = scheduler.kind == SchedulerKind::reactive;
  const bool predictive = scheduler.kind == SchedulerKind::predictive;

  // Rolling window of the last history_periods periods (reactive planning).
  std::vector<std::uint32_t> window_counts;
  std::deque<std::vector<std::pair<PageId, std::uint32_t>>> window_parts;
  if (reactive) window_counts.assign(footprint, 0);

  std::vector<std::uint32_t> scratch_counts(footprint, 0);
  std::vector<PageId> touched;
  SchedulerState state;

  SimResult result;
  result.capacity_pages = capacity;
  result.footprint_pages = footprint;
  result.per_period_log.reserve(n_periods);

  for (std::uint64_t k = 0; k < n_periods; ++k) {
    const std::uint64_t begin = k * period_requests;
    const std::uint64_t end = std::min(total, begin + period_requests);
    const double period_start_clock = clock;

    clock += config.per_period_overhead_ns;
    period_overhead += config.per_period_overhead_ns;

    MigrationPlan plan;
    if (reactive) {
      if (!window_parts.empty()) {
        plan = plan_period(scheduler, placement, window_counts, capacity, &state);
      }
    } else if (predictive) {
      std::fill(scratch_counts.begin(), scratch_counts.end(), 0);
      for (std::uint64_t i = begin; i < end; ++i) ++scratch_counts[trace.accesses[i]];
      plan = plan_period(scheduler, placement, scratch_counts, capacity, &state);
    }

    const std::uint64_t n_swaps = plan.size();
    for (const auto& [promote, demote] : plan.swaps) placement.swap_pair(promote, demote);
    if (n_swaps > 0) {
      migrations += n_swaps;
      migration_raw += static_cast<double>(n_swaps) * config.per_migration_delay_ns;
      const double migration_start = clock;
      clock += (1.0 - config.migration_overlap_fraction) * static_cast<double>(n_swaps) *
               config.per_migration_delay_ns;
      for (int m = 0; m < 2; ++m) {
        queue_free[m] = std::max(queue_free[m], migration_start) +
                        static_cast<double>(n_swaps) * swap_bytes_per_memory * ns_per_byte[m];
      }
    }

    std::uint64_t period_hits = 0;
    touched.clear();
    for (std::uint64_t i = begin; i < end; ++i) {
      const PageId page = trace.accesses[i];
      const int mem = placement.location[page] == Location::fast ? 0 : 1;
      const double start = std::max(clock, queue_free[mem]);
      bandwidth_delay += start - clock;
      queue_free[mem] = start + request_service_ns[mem];
      clock = start + latency_ns[mem];
      access_time += latency_ns[mem];
      placement.lru_clock[page] = static_cast<std::int64_t>(i);
      if (mem == 0) {
        ++hits;
        ++period_hits;
      }
      if (reactive) {
        if (scratch_counts[page] == 0) touched.push_back(page);
        ++scratch_counts[page];
      }
    }

    if (reactive) {
      std::vector<std::pair<PageId, std::uint32_t>> part;
      part.reserve(touched.size());
      for (PageId page : touched) {
        part.emplace_back(page, scratch_counts[page]);
        window_counts[page] += scratch_counts[page];
        scratch_counts[page] = 0;
      }
      window_parts.push_back(std::move(part));
      if (window_parts.size() > scheduler.history_periods) {
        for (const auto& [page, count] : window_parts.front()) window_counts[page] -= count;
        window_parts.pop_front();
      }
    }

    // Occupancy recount keeps the capacity and conservation invariants honest
    // in the per-period log.
    std::uint64_t fast_now = 0;
    for (std::uint32_t p = 0; p < footprint; ++p) {
      if (placement.location[p] == Location::fast) ++fast_now;
    }
    placement.fast_pages = fast_now;

    PeriodRecord record;
    record.index = k;
    record.requests = end - begin;
    record.fast_hits = period_hits;
    record.migrations = n_swaps;
    record.fast_pages_end = fast_now;
    record.total_pages = footprint;
    record.runtime_ns = clock - period_start_clock;
    result.per_period_log.push_back(record);
  }

  result.access_time_ns = access_time;
  result.bandwidth_delay_ns = bandwidth_delay;
  result.migration_time_ns = migration_raw;
  result.period_overhead_ns = period_overhead;
  result.runtime_ns = access_time + bandwidth_delay +
                      (1.0 - config.migration_overlap_fraction) * migration_raw + period_overhead;
  result.migrations = migrations;
  result.bytes_moved = migrations * 2 * trace.page_size_bytes;
  result.fast_hit_fraction = static_cast<double>(hits) / static_cast<double>(total);
  return result;
}

double all_fast_runtime(const AccessTrace& trace, const HybridMemoryConfig& config) {
  HybridMemoryConfig ideal = config;
  ideal.fast_capacity_fraction = 1.0;
  ideal.per_period_overhead_ns = 0.0;
  ideal.per_migration_delay_ns = 0.0;
  SchedulerSpec noop;
  noop.kind = SchedulerKind::no_op;
  return simulate(trace, ideal, noop, trace.total_requests()).runtime_ns;
}

void write_sim_result_csv(const SimResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write sim result: " + path.string());
  out << "runtime_ns,access_time_ns,bandwidth_delay_ns,migration_time_ns,period_overhead_ns,"
         "migrations,bytes_moved,fast_hit_fraction\n";
  out << format_double(result.runtime_ns) << ',' << format_double(result.access_time_ns) << ','
      << format_double(result.bandwidth_delay_ns) << ',' << format_double(result.migration_time_ns)
      << ',' << format_double(result.period_overhead_ns) << ',' << result.migrations << ','
      << result.bytes_moved << ',' << format_double(result.fast_hit_fraction) << '\n';
  if (!out) throw FileError("failed writing sim result: " + path.string());
}

void write_period_log_csv(const SimResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write period log: " + path.string());
  out << "period_index,requests,fast_hits,migrations,fast_pages,runtime_ns\n";
  for (const PeriodRecord& record : result.per_period_log) {
    out << record.index << ',' << record.requests << ',' << record.fast_hits << ','
        << record.migrations << ',' << record.fast_pages_end << ','
        << format_double(record.runtime_ns) << '\n';
  }
  if (!out) throw FileError("failed writing period log: " + path.string());
}

}  // namespace cori
