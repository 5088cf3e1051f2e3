#include "cori/tuner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "cori/config_io.hpp"
#include "cori/error.hpp"

namespace cori {

namespace {

TrialResult make_trial(double period, const SimResult& sim, double all_fast,
                       std::uint32_t index) {
  TrialResult trial;
  trial.period = period;
  trial.runtime_ns = sim.runtime_ns;
  trial.slowdown_vs_allfast = sim.runtime_ns / all_fast - 1.0;
  trial.bytes_moved = sim.bytes_moved;
  trial.migrations = sim.migrations;
  trial.trial_index = index;
  return trial;
}

// min-runtime selection: ties prefer fewer bytes moved, then the shorter period.
const TrialResult& select_min_runtime(const std::vector<TrialResult>& trials) {
  const TrialResult* best = &trials.front();
  for (const TrialResult& t : trials) {
    if (t.runtime_ns < best->runtime_ns ||
        (t.runtime_ns == best->runtime_ns && t.bytes_moved < best->bytes_moved) ||
        (t.runtime_ns == best->runtime_ns && t.bytes_moved == best->bytes_moved &&
         t.period < best->period)) {
      best = &t;
    }
  }
  return *best;
}

const TrialResult* select_first_knee(const std::vector<TrialResult>& trials,
                                     double knee_fraction, double epsilon) {
  double best_runtime = trials.front().runtime_ns;
  for (std::size_t i = 1; i < trials.size(); ++i) {
    best_runtime = std::min(best_runtime, trials[i].runtime_ns);
    const double knee_limit =
        knee_fraction * static_cast<double>(trials[i - 1].bytes_moved);
    if (static_cast<double>(trials[i].bytes_moved) <= knee_limit &&
        trials[i].runtime_ns <= best_runtime * (1.0 + epsilon)) {
      return &trials[i];
    }
  }
  return nullptr;
}

}  // namespace

TuningReport run_tuning(const CandidateSet& candidates, const AccessTrace& trace,
                        const HybridMemoryConfig& config, const SchedulerSpec& scheduler,
                        const StoppingPolicy& policy, SelectionRule selection,
                        double knee_fraction) {
  if (candidates.periods.empty()) throw InvalidArgument("run_tuning: no candidates");
  if (candidates.domain != ReuseDomain::requests) {
    throw InvalidArgument("run_tuning: candidates must be in the requests domain "
                          "(apply to_request_domain first)");
  }
  if (policy.patience < 1) throw InvalidArgument("run_tuning: patience must be >= 1");
  if (policy.improvement_epsilon < 0.0) {
    throw InvalidArgument("run_tuning: improvement_epsilon must be >= 0");
  }

  const double all_fast = all_fast_runtime(trace, config);
  const std::uint64_t total = trace.total_requests();

  TuningReport report;
  report.selection_rule = selection;
  report.all_fast_runtime_ns = all_fast;

  double best_runtime = std::numeric_limits<double>::infinity();
  std::uint32_t stale_trials = 0;
  bool stopped = false;

  for (std::size_t i = 0; i < candidates.periods.size() && !stopped; ++i) {
    const double period = candidates.periods[i];
    const auto period_requests = static_cast<std::uint64_t>(std::llround(period));
    if (period_requests < 1 || period_requests > total) {
      throw InvalidArgument("run_tuning: candidate period " + format_double(period) +
                            " outside [1, " + std::to_string(total) + "]");
    }

    SimResult sim;
    try {
      sim = simulate(trace, config, scheduler, period_requests);
    } catch (const Error& e) {
      throw Error("trial at period " + std::to_string(period_requests) + " failed: " + e.what());
    }
    report.trials.push_back(
        make_trial(period, sim, all_fast, static_cast<std::uint32_t>(report.trials.size())));
    const TrialResult& trial = report.trials.back();

    const bool improved = trial.runtime_ns < best_runtime * (1.0 - policy.improvement_epsilon);
    best_runtime = std::min(best_runtime, trial.runtime_ns);
    if (report.trials.size() == 1 || improved) {
      stale_trials = 0;
    } else {
      ++stale_trials;
    }

    if (policy.target_slowdown && trial.slowdown_vs_allfast <= *policy.target_slowdown) {
      report.stop_reason = StopReason::target_met;
      stopped = true;
    } else if (stale_trials >= policy.patience) {
      report.stop_reason = StopReason::patience_exhausted;
      stopped = true;
    } else if (policy.max_trials != 0 && report.trials.size() >= policy.max_trials &&
               i + 1 < candidates.periods.size()) {
      report.stop_reason = StopReason::max_trials;
      stopped = true;
    }
  }
  if (!stopped) report.stop_reason = StopReason::candidates_exhausted;

  report.trials_used = report.trials.size();
  if (selection == SelectionRule::first_knee) {
    const TrialResult* knee =
        select_first_knee(report.trials, knee_fraction, policy.improvement_epsilon);
    report.selected_period = knee ? knee->period : select_min_runtime(report.trials).period;
  } else {
    report.selected_period = select_min_runtime(report.trials).period;
  }
  return report;
}

SweepResult exhaustive_best(const AccessTrace& trace, const HybridMemoryConfig& config,
                            const SchedulerSpec& scheduler, std::uint64_t step,
                            unsigned threads) {
  if (step < 1) throw InvalidArgument("exhaustive_best: step must be >= 1");
  if (trace.total_requests() < 2) {
    throw InvalidArgument("exhaustive_best: trace must have at least 2 requests");
  }
  const std::uint64_t half = trace.total_requests() / 2;

  std::vector<std::uint64_t> periods;
  for (std::uint64_t p = step; p <= half; p += step) periods.push_back(p);
  if (periods.empty()) periods.push_back(half);

  const double all_fast = all_fast_runtime(trace, config);
  std::vector<TrialResult> sweep(periods.size());

  auto evaluate = [&](std::size_t index) {
    const SimResult sim = simulate(trace, config, scheduler, periods[index]);
    sweep[index] = make_trial(static_cast<double>(periods[index]), sim, all_fast,
                              static_cast<std::uint32_t>(index));
  };

  unsigned worker_count = threads != 0 ? threads : std::thread::hardware_concurrency();
  worker_count = std::max(1u, std::min<unsigned>(worker_count, periods.size()));
  if (worker_count <= 1) {
    for (std::size_t i = 0; i < periods.size(); ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (unsigned w = 0; w < worker_count; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < periods.size(); i = next.fetch_add(1)) {
          evaluate(i);
        }
      });
    }
    for (std::thread& worker : workers) worker.join();
  }

  SweepResult result;
  result.all_fast_runtime_ns = all_fast;
  result.sweep = std::move(sweep);
  const TrialResult* best = &result.sweep.front();
  for (const TrialResult& t : result.sweep) {
    if (t.runtime_ns < best->runtime_ns) best = &t;  // ascending order: ties keep the shorter
  }
  result.best_period = best->period;
  result.best_runtime_ns = best->runtime_ns;
  return result;
}

void save_tuning_report_csv(const TuningReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write tuning report: " + path.string());
  out << "trial,period,runtime_ns,slowdown_vs_allfast,bytes_moved,migrations\n";
  for (const TrialResult& t : report.trials) {
    out << t.trial_index << ',' << format_double(t.period) << ',' << format_double(t.runtime_ns)
        << ',' << format_double(t.slowdown_vs_allfast) << ',' << t.bytes_moved << ','
        << t.migrations << '\n';
  }
  out << "# selected_period=" << format_double(report.selected_period)
      << " trials_used=" << report.trials_used
      << " stop_reason=" << stop_reason_name(report.stop_reason)
      << " selection_rule=" << selection_rule_name(report.selection_rule) << '\n';
  if (!out) throw FileError("failed writing tuning report: " + path.string());
}

std::string summarize_report(const TuningReport& report, double requests_per_second) {
  const TrialResult* selected = nullptr;
  for (const TrialResult& t : report.trials) {
    if (t.period == report.selected_period) selected = &t;
  }
  std::string text;
  text += "selected period: " + format_double(report.selected_period) + " requests (" +
          format_double(report.selected_period / requests_per_second) + " s)\n";
  text += "trials used: " + std::to_string(report.trials_used) +
          " (stop: " + stop_reason_name(report.stop_reason) + ")\n";
  if (selected != nullptr) {
    text += "slowdown vs all-fast: " + format_double(selected->slowdown_vs_allfast) + "\n";
    text += "bytes moved: " + std::to_string(selected->bytes_moved) + "\n";
  }
  return text;
}

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::target_met: return "target-met";
    case StopReason::patience_exhausted: return "patience-exhausted";
    case StopReason::candidates_exhausted: return "candidates-exhausted";
    case StopReason::max_trials: return "max-trials";
  }
  return "?";
}

const char* selection_rule_name(SelectionRule rule) {
  return rule == SelectionRule::min_runtime ? "min-runtime" : "first-knee";
}

SelectionRule parse_selection_rule(const std::string& name) {
  if (name == "min-runtime") return SelectionRule::min_runtime;
  if (name == "first-knee") return SelectionRule::first_knee;
  throw InvalidArgument("unknown selection rule '" + name +
                        "' (expected min-runtime or first-knee)");
}

}  // namespace cori
