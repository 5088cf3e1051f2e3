#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cori/memsim.hpp"
#include "cori/trace.hpp"

namespace cori {

enum class SchedulerKind { reactive, predictive, no_op };
enum class HotnessMode { topk, ema };

// Periodic page scheduler configuration. Reactive schedulers plan from the
// access counts of the last history_periods completed periods; predictive
// ones are fed the exact counts of the upcoming period. Hotness is either
// rank-by-count with the fast capacity as K (topk) or an exponential moving
// average of per-period accessed bits compared against a threshold (ema).
struct SchedulerSpec {
  SchedulerKind kind = SchedulerKind::reactive;
  std::uint32_t history_periods = 1;
  HotnessMode hotness_mode = HotnessMode::topk;
  double ema_smoothing = 0.5;   // lambda in (0, 1]
  double ema_threshold = 0.25;  // theta in (0, 1)

  void validate() const;
};

// Ordered (promote, demote) pairs for one period. Promotes are slow-resident,
// demotes fast-resident, no page appears twice, and the plan never exceeds
// the fast capacity.
struct MigrationPlan {
  std::vector<std::pair<PageId, PageId>> swaps;

  std::size_t size() const { return swaps.size(); }
  bool empty() const { return swaps.empty(); }
};

// Hotness state owned by a single simulation run (ema scores persist across
// periods; topk mode keeps no state).
struct SchedulerState {
  std::vector<double> ema_scores;
};

// Builds the swap list for one period.
//   topk: hot = the capacity_pages pages with the highest window count
//         (zero-count pages are never hot; ties go to the lower PageId).
//   ema:  scores are first updated with the window's accessed bits
//         (s <- lambda*bit + (1-lambda)*s), hot = score >= threshold, ranked
//         by score (ties to the lower PageId), capped at capacity_pages.
// Promotions are the hot pages currently slow-resident, in rank order.
// Victims are fast-resident non-hot pages, least recently used first.
// Pairs are zipped in rank order and truncated at victim availability.
MigrationPlan plan_period(const SchedulerSpec& spec, const PlacementMap& placement,
                          std::span<const std::uint32_t> window_counts,
                          std::uint64_t capacity_pages,
                          SchedulerState* state = nullptr);

// Exact per-page access counts of period `period_index` (the oracle feed for
// predictive scheduling). The last period may be shorter.
std::vector<std::uint32_t> oracle_counts(const AccessTrace& trace,
                                         std::uint64_t period_requests,
                                         std::uint64_t period_index);

SchedulerKind parse_scheduler_kind(const std::string& name);
const char* scheduler_kind_name(SchedulerKind kind);
HotnessMode parse_hotness_mode(const std::string& name);
const char* hotness_mode_name(HotnessMode mode);

}  // namespace cori
