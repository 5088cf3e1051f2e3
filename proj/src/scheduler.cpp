#include "cori/scheduler.hpp"

#include <algorithm>

#include "cori/error.hpp"

namespace cori {

void SchedulerSpec::validate() const {
  if (kind == SchedulerKind::no_op) return;
  if (history_periods < 1) throw InvalidArgument("scheduler: history_periods must be >= 1");
  if (!(ema_smoothing > 0.0) || ema_smoothing > 1.0) {
    throw InvalidArgument("scheduler: ema_smoothing must be in (0, 1]");
  }
  if (!(ema_threshold > 0.0) || !(ema_threshold < 1.0)) {
    throw InvalidArgument("scheduler: ema_threshold must be in (0, 1)");
  }
}

namespace {

// Fast-resident pages that may be demoted, least recently used first.
std::vector<PageId> victim_order(const PlacementMap& placement,
                                 const std::vector<char>& hot_mask) {
  std::vector<PageId> victims;
  const std::size_t footprint = placement.location.size();
  for (std::size_t p = 0; p < footprint; ++p) {
    if (placement.location[p] == Location::fast && !hot_mask[p]) {
      victims.push_back(static_cast<PageId>(p));
    }
  }
  std::stable_sort(victims.begin(), victims.end(), [&](PageId a, PageId b) {
    if (placement.lru_clock[a] != placement.lru_clock[b]) {
      return placement.lru_clock[a] < placement.lru_clock[b];
    }
    return a < b;
  });
  return victims;
}

MigrationPlan pair_up(const PlacementMap& placement, const std::vector<PageId>& hot_ranked,
                      std::uint64_t capacity_pages) {
  std::vector<char> hot_mask(placement.location.size(), 0);
  for (PageId page : hot_ranked) hot_mask[page] = 1;

  std::vector<PageId> promotions;
  for (PageId page : hot_ranked) {
    if (placement.location[page] == Location::slow) promotions.push_back(page);
  }

  const std::vector<PageId> victims = victim_order(placement, hot_mask);

  MigrationPlan plan;
  const std::size_t n = std::min({promotions.size(), victims.size(),
                                  static_cast<std::size_t>(capacity_pages)});
  plan.swaps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) plan.swaps.emplace_back(promotions[i], victims[i]);
  return plan;
}

}  // namespace

MigrationPlan plan_period(const SchedulerSpec& spec, const PlacementMap& placement,
                          std::span<const std::uint32_t> window_counts,
                          std::uint64_t capacity_pages, SchedulerState* state) {
  spec.validate();
  if (spec.kind == SchedulerKind::no_op) return {};
  const std::size_t footprint = placement.location.size();
  if (window_counts.size() != footprint) {
    throw InvalidArgument("plan_period: history covers " + std::to_string(window_counts.size()) +
                          " pages but placement has " + std::to_string(footprint));
  }

  std::vector<PageId> hot_ranked;
  if (spec.hotness_mode == HotnessMode::topk) {
    // Hot = the capacity_pages most-accessed pages of the window; pages the
    // window never touched are not hot. Ties go to the lower PageId.
    for (std::size_t p = 0; p < footprint; ++p) {
      if (window_counts[p] > 0) hot_ranked.push_back(static_cast<PageId>(p));
    }
    std::stable_sort(hot_ranked.begin(), hot_ranked.end(), [&](PageId a, PageId b) {
      if (window_counts[a] != window_counts[b]) return window_counts[a] > window_counts[b];
      return a < b;
    });
    if (hot_ranked.size() > capacity_pages) hot_ranked.resize(capacity_pages);
  } else {
    if (state == nullptr) throw InvalidArgument("plan_period: ema mode requires SchedulerState");
    if (state->ema_scores.size() != footprint) state->ema_scores.assign(footprint, 0.0);
    const double lambda = spec.ema_smoothing;
    for (std::size_t p = 0; p < footprint; ++p) {
      const double bit = window_counts[p] > 0 ? 1.0 : 0.0;
      state->ema_scores[p] = lambda * bit + (1.0 - lambda) * state->ema_scores[p];
    }
    for (std::size_t p = 0; p < footprint; ++p) {
      if (state->ema_scores[p] >= spec.ema_threshold) hot_ranked.push_back(static_cast<PageId>(p));
    }
    std::stable_sort(hot_ranked.begin(), hot_ranked.end(), [&](PageId a, PageId b) {
      if (state->ema_scores[a] != state->ema_scores[b]) {
        return state->ema_scores[a] > state->ema_scores[b];
      }
      return a < b;
    });
    if (hot_ranked.size() > capacity_pages) hot_ranked.resize(capacity_pages);
  }

  if (hot_ranked.empty()) return {};
  return pair_up(placement, hot_ranked, capacity_pages);
}

std::vector<std::uint32_t> oracle_counts(const AccessTrace& trace,
                                         std::uint64_t period_requests,
                                         std::uint64_t period_index) {
  if (trace.empty()) throw InvalidArgument("oracle_counts: trace is empty");
  const std::uint64_t total = trace.total_requests();
  if (period_requests < 1 || period_requests > total) {
    throw InvalidArgument("oracle_counts: period_requests out of range");
  }
  const std::uint64_t n_periods = (total + period_requests - 1) / period_requests;
  if (period_index >= n_periods) {
    throw InvalidArgument("oracle_counts: period_index " + std::to_string(period_index) +
                          " out of range (trace has " + std::to_string(n_periods) + " periods)");
  }
  const std::uint64_t begin = period_index * period_requests;
  const std::uint64_t end = std::min(total, begin + period_requests);
  std::vector<std::uint32_t> counts(trace.footprint_pages, 0);
  for (std::uint64_t i = begin; i < end; ++i) ++counts[trace.accesses[i]];
  return counts;
}

SchedulerKind parse_scheduler_kind(const std::string& name) {
  if (name == "reactive") return SchedulerKind::reactive;
  if (name == "predictive") return SchedulerKind::predictive;
  if (name == "no-op") return SchedulerKind::no_op;
  throw InvalidArgument("unknown scheduler kind '" + name +
                        "' (expected reactive, predictive or no-op)");
}

const char* scheduler_kind_name(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::reactive: return "reactive";
    case SchedulerKind::predictive: return "predictive";
    case SchedulerKind::no_op: return "no-op";
  }
  return "?";
}

HotnessMode parse_hotness_mode(const std::string& name) {
  if (name == "topk") return HotnessMode::topk;
  if (name == "ema") return HotnessMode::ema;
  throw InvalidArgument("unknown hotness mode '" + name + "' (expected topk or ema)");
}

const char* hotness_mode_name(HotnessMode mode) {
  return mode == HotnessMode::topk ? "topk" : "ema";
}

}  // namespace cori
