#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cori/freqgen.hpp"
#include "cori/memsim.hpp"
#include "cori/scheduler.hpp"
#include "cori/trace.hpp"

namespace cori {

struct TrialResult {
  double period = 0.0;                // requests
  double runtime_ns = 0.0;
  double slowdown_vs_allfast = 0.0;   // runtime / all_fast_runtime - 1
  std::uint64_t bytes_moved = 0;
  std::uint64_t migrations = 0;
  std::uint32_t trial_index = 0;
};

enum class StopReason { target_met, patience_exhausted, candidates_exhausted, max_trials };
enum class SelectionRule { min_runtime, first_knee };

// A trial improves when it beats the best runtime so far by more than
// improvement_epsilon (relative). Tuning stops once `patience` consecutive
// trials fail to do so, when the optional slowdown target is met, or when the
// candidates (or max_trials, 0 = unlimited) run out.
struct StoppingPolicy {
  std::uint64_t max_trials = 0;
  std::uint32_t patience = 2;
  double improvement_epsilon = 0.01;
  std::optional<double> target_slowdown;
};

struct TuningReport {
  std::vector<TrialResult> trials;
  double selected_period = 0.0;
  std::uint64_t trials_used = 0;
  StopReason stop_reason = StopReason::candidates_exhausted;
  SelectionRule selection_rule = SelectionRule::min_runtime;
  double all_fast_runtime_ns = 0.0;
};

// Runs trials in candidate order (requests domain required; convert seconds
// sets with to_request_domain first). Selection:
//   min-runtime : lowest runtime; ties prefer fewer bytes moved, then the
//                 shorter period.
//   first-knee  : earliest trial whose bytes_moved dropped to at most
//                 knee_fraction of the previous trial's while its runtime is
//                 within improvement_epsilon of the best so far; falls back
//                 to min-runtime when no trial qualifies.
TuningReport run_tuning(const CandidateSet& candidates, const AccessTrace& trace,
                        const HybridMemoryConfig& config, const SchedulerSpec& scheduler,
                        const StoppingPolicy& policy = {},
                        SelectionRule selection = SelectionRule::min_runtime,
                        double knee_fraction = 0.5);

struct SweepResult {
  double best_period = 0.0;
  double best_runtime_ns = 0.0;
  double all_fast_runtime_ns = 0.0;
  std::vector<TrialResult> sweep;   // ascending period order
};

// Ground-truth oracle: simulates every period in {step, 2*step, ...,
// floor(N/2)} and returns the argmin (ties go to the shorter period). The
// sweep has no early stop, so periods are evaluated by a small thread pool
// and merged back in period order; threads = 0 picks the hardware count.
SweepResult exhaustive_best(const AccessTrace& trace, const HybridMemoryConfig& config,
                            const SchedulerSpec& scheduler, std::uint64_t step,
                            unsigned threads = 0);

// CSV: one row per trial plus a trailing "# selected_period=..." summary line.
void save_tuning_report_csv(const TuningReport& report, const std::filesystem::path& path);

// Human-readable summary; requests_per_second converts the selected period
// into the seconds domain.
std::string summarize_report(const TuningReport& report, double requests_per_second);

const char* stop_reason_name(StopReason reason);
const char* selection_rule_name(SelectionRule rule);
SelectionRule parse_selection_rule(const std::string& name);

}  // namespace cori
