// cori: trace-driven tuning toolkit for flat fast/slow hybrid memory.
//
// Subcommands wire the pipeline together: synthesize or ingest a trace,
// collect a reuse histogram, generate candidate scheduling periods, run a
// tuning session or an exhaustive sweep, and replay the fixed frequencies of
// existing page schedulers for comparison. All outputs are CSV files under
// --out; every command is deterministic given its full argument list.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cori/config_io.hpp"
#include "cori/error.hpp"
#include "cori/freqgen.hpp"
#include "cori/memsim.hpp"
#include "cori/reuse.hpp"
#include "cori/scheduler.hpp"
#include "cori/trace.hpp"
#include "cori/tuner.hpp"

namespace fs = std::filesystem;
using namespace cori;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::uint64_t page_size = 4096;
};

struct TraceSource {
  AccessTrace trace;
  bool from_file = false;
};

SessionFileConfig load_session_config(const GlobalArgs& globals) {
  if (globals.config_path.empty()) return {};
  return load_config_file(globals.config_path);
}

fs::path ensure_out_dir(const GlobalArgs& globals) {
  fs::path dir(globals.out_dir);
  fs::create_directories(dir);
  return dir;
}

// A trace argument is either a "kind:PxR[:seed]" synthetic spec or a path.
TraceSource resolve_trace(const std::string& source, const std::string& format_name,
                          const GlobalArgs& globals) {
  if (auto spec = try_parse_synthetic_spec(source)) {
    return {generate_synthetic(spec->kind, spec->pages, spec->repeats,
                               spec->seed.value_or(globals.seed)),
            false};
  }
  const fs::path path(source);
  if (!fs::exists(path)) throw FileError("trace file not found: " + source);
  const TraceFormat format =
      format_name.empty() ? detect_trace_format(path) : parse_trace_format(format_name);
  return {load_trace(path, format, globals.page_size), true};
}

// Loaded traces get their page renumbering written next to the other outputs.
void emit_mapping_if_loaded(const TraceSource& source, const fs::path& out_dir) {
  if (source.from_file) save_page_mapping(source.trace, out_dir / "mapping.csv");
}

// Fixed operating frequencies of existing page-scheduling systems, as period
// durations in seconds. Used by `compare` to replay each one over a trace.
struct FixedSolution {
  const char* name;
  double period_seconds;
};
constexpr FixedSolution kFixedSolutions[] = {
    {"thermostat", 10.0}, {"nimble", 5.0},          {"ingens", 2.0},
    {"hma", 1.0},         {"hetero-os-visor", 0.1}, {"kleio", 0.01},
};

struct GenTraceArgs {
  std::string spec;
  std::string format = "page-csv";
  std::string name = "trace";
};

int run_gen_trace(const GenTraceArgs& args, const GlobalArgs& globals) {
  const auto spec = try_parse_synthetic_spec(args.spec);
  if (!spec) throw InvalidArgument("--spec must match kind:PxR[:seed], got '" + args.spec + "'");
  const AccessTrace trace = generate_synthetic(spec->kind, spec->pages, spec->repeats,
                                               spec->seed.value_or(globals.seed));
  const TraceFormat format = parse_trace_format(args.format);
  const fs::path out_dir = ensure_out_dir(globals);
  const fs::path path =
      out_dir / (args.name + (format == TraceFormat::page_csv ? ".csv" : ".hex"));
  save_trace(trace, path, format);
  std::cout << "wrote " << path.string() << " (" << trace.total_requests() << " requests, "
            << trace.footprint_pages << " pages)\n";
  return 0;
}

struct CollectArgs {
  std::string trace;
  std::string format;
  std::string loops;
  std::uint64_t bin_width = 1000;
  std::string name = "reuse_hist";
};

int run_collect(const CollectArgs& args, const GlobalArgs& globals) {
  const fs::path out_dir = ensure_out_dir(globals);
  ReuseHistogram hist;
  if (!args.loops.empty()) {
    if (!fs::exists(args.loops)) throw FileError("loop histogram not found: " + args.loops);
    hist = import_loop_histogram(args.loops);
  } else if (!args.trace.empty()) {
    const TraceSource source = resolve_trace(args.trace, args.format, globals);
    emit_mapping_if_loaded(source, out_dir);
    hist = collect_reuse(source.trace, args.bin_width);
  } else {
    throw InvalidArgument("collect: provide --trace or --loops");
  }
  const fs::path path = out_dir / (args.name + ".csv");
  save_histogram_csv(hist, path);
  std::cout << "wrote " << path.string() << " (" << hist.bins.size() << " bins, "
            << hist.total_observations << " observations, domain "
            << reuse_domain_name(hist.domain) << ")\n";
  return 0;
}

struct CandidatesArgs {
  std::string trace;
  std::string format;
  std::string hist;
  std::uint64_t bin_width = 1000;
  std::string generator = "cori";
  double timestep = 100.0;
  double runtime = 0.0;  // 0 = take the trace length
  bool to_requests = false;
  std::string name = "candidates";
};

int run_candidates(const CandidatesArgs& args, const GlobalArgs& globals,
                   const SessionFileConfig& session) {
  const fs::path out_dir = ensure_out_dir(globals);
  const CandidateSource generator = parse_candidate_source(args.generator);

  ReuseHistogram hist;
  bool have_hist = false;
  double runtime = args.runtime;
  ReuseDomain domain = ReuseDomain::requests;

  if (!args.hist.empty()) {
    if (!fs::exists(args.hist)) throw FileError("histogram not found: " + args.hist);
    hist = load_histogram_csv(args.hist);
    have_hist = true;
    domain = hist.domain;
    if (runtime <= 0.0) {
      throw InvalidArgument("candidates: --runtime is required with --hist");
    }
  } else if (!args.trace.empty()) {
    const TraceSource source = resolve_trace(args.trace, args.format, globals);
    emit_mapping_if_loaded(source, out_dir);
    if (generator == CandidateSource::cori) {
      hist = collect_reuse(source.trace, args.bin_width);
      have_hist = true;
    }
    if (runtime <= 0.0) runtime = static_cast<double>(source.trace.total_requests());
  } else {
    throw InvalidArgument("candidates: provide --trace or --hist");
  }

  CandidateSet set;
  if (generator == CandidateSource::cori) {
    if (!have_hist) throw InvalidArgument("candidates: cori needs a trace or histogram");
    const DominantReuse dr = dominant_reuse(hist);
    set = cori_candidates(dr, runtime);
    std::cout << "dominant reuse: " << format_double(dr.value) << ' '
              << reuse_domain_name(dr.domain) << '\n';
  } else {
    set = baseline_candidates(args.timestep, runtime, generator, globals.seed, domain);
  }
  if (args.to_requests && set.domain == ReuseDomain::seconds) {
    set = to_request_domain(set, session.memory.requests_per_second);
  }
  if (set.degenerate_warning) {
    std::cerr << "warning: dominant reuse exceeds half the runtime; "
                 "only the half-runtime candidate is generated\n";
  }

  const fs::path path = out_dir / (args.name + ".csv");
  save_candidates_csv(set, path);
  std::cout << "wrote " << path.string() << " (" << set.periods.size() << " candidates)\n";
  return 0;
}

struct TuneArgs {
  std::string trace;
  std::string format;
  std::string loops;
  double runtime_seconds = 0.0;
  std::uint64_t bin_width = 1000;
  std::string generator = "cori";
  double timestep = 100.0;
  std::string selection = "min-runtime";
  double knee_fraction = 0.5;
  std::uint64_t max_trials = 0;
  std::uint32_t patience = 2;
  double epsilon = 0.01;
  double target_slowdown = -1.0;  // < 0 = unset
};

int run_tune(const TuneArgs& args, const GlobalArgs& globals, const SessionFileConfig& session) {
  const fs::path out_dir = ensure_out_dir(globals);
  if (args.trace.empty()) throw InvalidArgument("tune: --trace is required");
  const TraceSource source = resolve_trace(args.trace, args.format, globals);
  emit_mapping_if_loaded(source, out_dir);
  const AccessTrace& trace = source.trace;

  const CandidateSource generator = parse_candidate_source(args.generator);
  CandidateSet candidates;
  if (generator == CandidateSource::cori) {
    if (!args.loops.empty()) {
      // Loop durations stand in for the reuse histogram: candidates come out
      // in seconds and are mapped onto the request domain for simulation.
      if (!fs::exists(args.loops)) throw FileError("loop histogram not found: " + args.loops);
      if (args.runtime_seconds <= 0.0) {
        throw InvalidArgument("tune: --runtime-seconds is required with --loops");
      }
      const ReuseHistogram hist = import_loop_histogram(args.loops);
      candidates = to_request_domain(cori_candidates(dominant_reuse(hist), args.runtime_seconds),
                                     session.memory.requests_per_second);
    } else {
      const ReuseHistogram hist = collect_reuse(trace, args.bin_width);
      candidates =
          cori_candidates(dominant_reuse(hist), static_cast<double>(trace.total_requests()));
    }
  } else {
    candidates = baseline_candidates(args.timestep, static_cast<double>(trace.total_requests()),
                                     generator, globals.seed);
  }

  StoppingPolicy policy;
  policy.max_trials = args.max_trials;
  policy.patience = args.patience;
  policy.improvement_epsilon = args.epsilon;
  if (args.target_slowdown >= 0.0) policy.target_slowdown = args.target_slowdown;

  const SelectionRule selection = parse_selection_rule(args.selection);
  const TuningReport report = run_tuning(candidates, trace, session.memory, session.scheduler,
                                         policy, selection, args.knee_fraction);

  const fs::path report_path = out_dir / "tuning_report.csv";
  save_tuning_report_csv(report, report_path);
  const SimResult selected_sim =
      simulate(trace, session.memory, session.scheduler,
               static_cast<std::uint64_t>(report.selected_period));
  write_period_log_csv(selected_sim, out_dir / "selected_period_log.csv");

  std::cout << summarize_report(report, session.memory.requests_per_second);
  std::cout << "wrote " << report_path.string() << '\n';
  return 0;
}

struct SweepArgs {
  std::string trace;
  std::string format;
  std::uint64_t step = 0;
  std::string name = "sweep";
};

int run_sweep(const SweepArgs& args, const GlobalArgs& globals, const SessionFileConfig& session) {
  const fs::path out_dir = ensure_out_dir(globals);
  if (args.trace.empty()) throw InvalidArgument("sweep: --trace is required");
  if (args.step < 1) throw InvalidArgument("sweep: --step must be >= 1");
  const TraceSource source = resolve_trace(args.trace, args.format, globals);
  emit_mapping_if_loaded(source, out_dir);

  const SweepResult result =
      exhaustive_best(source.trace, session.memory, session.scheduler, args.step);

  const fs::path path = out_dir / (args.name + ".csv");
  std::ofstream out(path);
  if (!out) throw FileError("cannot write sweep: " + path.string());
  out << "period,runtime_ns,slowdown_vs_allfast,slowdown_vs_best,bytes_moved\n";
  for (const TrialResult& t : result.sweep) {
    out << format_double(t.period) << ',' << format_double(t.runtime_ns) << ','
        << format_double(t.slowdown_vs_allfast) << ','
        << format_double(t.runtime_ns / result.best_runtime_ns - 1.0) << ',' << t.bytes_moved
        << '\n';
  }
  if (!out) throw FileError("failed writing sweep: " + path.string());

  std::cout << "best period: " << format_double(result.best_period) << " requests ("
            << format_double(result.best_period / session.memory.requests_per_second) << " s)\n";
  std::cout << "wrote " << path.string() << " (" << result.sweep.size() << " points)\n";
  return 0;
}

struct CompareArgs {
  std::string trace;
  std::string format;
  std::string mode = "solutions";
  std::uint64_t bin_width = 1000;
  double timestep = 100.0;
  std::uint32_t patience = 2;
  double epsilon = 0.01;
};

int run_compare(const CompareArgs& args, const GlobalArgs& globals,
                const SessionFileConfig& session) {
  const fs::path out_dir = ensure_out_dir(globals);
  if (args.trace.empty()) throw InvalidArgument("compare: --trace is required");
  const TraceSource source = resolve_trace(args.trace, args.format, globals);
  emit_mapping_if_loaded(source, out_dir);
  const AccessTrace& trace = source.trace;

  if (args.mode == "solutions") {
    // Replay each fixed-frequency system over this trace and config.
    const double all_fast = all_fast_runtime(trace, session.memory);
    const fs::path path = out_dir / "compare_solutions.csv";
    std::ofstream out(path);
    if (!out) throw FileError("cannot write comparison: " + path.string());
    out << "solution,period_seconds,period_requests,status,runtime_ns,slowdown_vs_allfast,"
           "bytes_moved\n";
    for (const FixedSolution& solution : kFixedSolutions) {
      const auto period_requests = std::max<long long>(
          1, std::llround(solution.period_seconds * session.memory.requests_per_second));
      out << solution.name << ',' << format_double(solution.period_seconds) << ','
          << period_requests << ',';
      if (static_cast<std::uint64_t>(period_requests) > trace.total_requests()) {
        out << "period-exceeds-trace,,,\n";
        continue;
      }
      const SimResult sim = simulate(trace, session.memory, session.scheduler,
                                     static_cast<std::uint64_t>(period_requests));
      out << "ok," << format_double(sim.runtime_ns) << ','
          << format_double(sim.runtime_ns / all_fast - 1.0) << ',' << sim.bytes_moved << '\n';
    }
    if (!out) throw FileError("failed writing comparison: " + path.string());
    std::cout << "wrote " << path.string() << '\n';
    return 0;
  }

  if (args.mode == "generators") {
    // One tuning session per generator under the same stopping policy.
    StoppingPolicy policy;
    policy.patience = args.patience;
    policy.improvement_epsilon = args.epsilon;
    const double runtime = static_cast<double>(trace.total_requests());

    const fs::path path = out_dir / "compare_generators.csv";
    std::ofstream out(path);
    if (!out) throw FileError("cannot write comparison: " + path.string());
    out << "generator,trials_used,selected_period,runtime_ns,slowdown_vs_allfast,bytes_moved,"
           "stop_reason\n";
    for (const char* name : {"cori", "base-left", "base-right", "base-random"}) {
      const CandidateSource generator = parse_candidate_source(name);
      CandidateSet candidates;
      if (generator == CandidateSource::cori) {
        candidates = cori_candidates(dominant_reuse(collect_reuse(trace, args.bin_width)), runtime);
      } else {
        candidates = baseline_candidates(args.timestep, runtime, generator, globals.seed);
      }
      const TuningReport report =
          run_tuning(candidates, trace, session.memory, session.scheduler, policy);
      const TrialResult* selected = nullptr;
      for (const TrialResult& t : report.trials) {
        if (t.period == report.selected_period) selected = &t;
      }
      out << name << ',' << report.trials_used << ',' << format_double(report.selected_period)
          << ',' << format_double(selected->runtime_ns) << ','
          << format_double(selected->slowdown_vs_allfast) << ',' << selected->bytes_moved << ','
          << stop_reason_name(report.stop_reason) << '\n';
    }
    if (!out) throw FileError("failed writing comparison: " + path.string());
    std::cout << "wrote " << path.string() << '\n';
    return 0;
  }

  throw InvalidArgument("compare: --mode must be solutions or generators");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cori: frequency tuning toolkit for page scheduling over hybrid memory"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs globals;
  app.add_option("--config", globals.config_path, "key = value config file (memory + scheduler)");
  app.add_option("--out", globals.out_dir, "output directory (created if missing)");
  app.add_option("--seed", globals.seed, "seed for synthetic traces and base-random ordering");
  app.add_option("--page-size", globals.page_size, "page size in bytes for trace ingestion");

  GenTraceArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen-trace", "synthesize a trace and write it to a file");
  gen->add_option("--spec", gen_args.spec, "kind:PxR[:seed], kind in strided|triangular|random|cyclic-phases")
      ->required();
  gen->add_option("--format", gen_args.format, "hex-address or page-csv");
  gen->add_option("--name", gen_args.name, "output file base name");

  CollectArgs collect_args;
  CLI::App* collect = app.add_subcommand("collect", "build a reuse histogram");
  collect->add_option("--trace", collect_args.trace, "trace path or synthetic spec");
  collect->add_option("--format", collect_args.format, "trace format override");
  collect->add_option("--loops", collect_args.loops, "loop-duration CSV to import instead");
  collect->add_option("--bin-width", collect_args.bin_width, "reuse bin width in requests");
  collect->add_option("--name", collect_args.name, "output file base name");

  CandidatesArgs cand_args;
  CLI::App* cand = app.add_subcommand("candidates", "generate candidate scheduling periods");
  cand->add_option("--trace", cand_args.trace, "trace path or synthetic spec");
  cand->add_option("--format", cand_args.format, "trace format override");
  cand->add_option("--hist", cand_args.hist, "reuse histogram CSV to use instead of a trace");
  cand->add_option("--bin-width", cand_args.bin_width, "reuse bin width in requests");
  cand->add_option("--generator", cand_args.generator, "cori, base-left, base-right or base-random");
  cand->add_option("--timestep", cand_args.timestep, "baseline grid step");
  cand->add_option("--runtime", cand_args.runtime, "runtime override (domain of the input)");
  cand->add_flag("--to-requests", cand_args.to_requests, "convert a seconds-domain set to requests");
  cand->add_option("--name", cand_args.name, "output file base name");

  TuneArgs tune_args;
  CLI::App* tune = app.add_subcommand("tune", "run a tuning session over generated candidates");
  tune->add_option("--trace", tune_args.trace, "trace path or synthetic spec")->required();
  tune->add_option("--format", tune_args.format, "trace format override");
  tune->add_option("--loops", tune_args.loops, "loop-duration CSV feeding the cori generator");
  tune->add_option("--runtime-seconds", tune_args.runtime_seconds, "measured runtime for --loops");
  tune->add_option("--bin-width", tune_args.bin_width, "reuse bin width in requests");
  tune->add_option("--generator", tune_args.generator, "cori, base-left, base-right or base-random");
  tune->add_option("--timestep", tune_args.timestep, "baseline grid step in requests");
  tune->add_option("--selection", tune_args.selection, "min-runtime or first-knee");
  tune->add_option("--knee-fraction", tune_args.knee_fraction, "bytes-moved drop for first-knee");
  tune->add_option("--max-trials", tune_args.max_trials, "trial cap (0 = all candidates)");
  tune->add_option("--patience", tune_args.patience, "non-improving trials before stopping");
  tune->add_option("--epsilon", tune_args.epsilon, "relative improvement threshold");
  tune->add_option("--target-slowdown", tune_args.target_slowdown,
                   "stop once slowdown vs all-fast reaches this (negative = off)");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "exhaustive period sweep (ground truth)");
  sweep->add_option("--trace", sweep_args.trace, "trace path or synthetic spec")->required();
  sweep->add_option("--format", sweep_args.format, "trace format override");
  sweep->add_option("--step", sweep_args.step, "period grid step in requests")->required();
  sweep->add_option("--name", sweep_args.name, "output file base name");

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand("compare", "fixed-frequency replays or generator duel");
  compare->add_option("--trace", compare_args.trace, "trace path or synthetic spec")->required();
  compare->add_option("--format", compare_args.format, "trace format override");
  compare->add_option("--mode", compare_args.mode, "solutions (default) or generators");
  compare->add_option("--bin-width", compare_args.bin_width, "reuse bin width for cori");
  compare->add_option("--timestep", compare_args.timestep, "baseline grid step in requests");
  compare->add_option("--patience", compare_args.patience, "stopping patience");
  compare->add_option("--epsilon", compare_args.epsilon, "improvement threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const SessionFileConfig session = load_session_config(globals);
    if (gen->parsed()) return run_gen_trace(gen_args, globals);
    if (collect->parsed()) return run_collect(collect_args, globals);
    if (cand->parsed()) return run_candidates(cand_args, globals, session);
    if (tune->parsed()) return run_tune(tune_args, globals, session);
    if (sweep->parsed()) return run_sweep(sweep_args, globals, session);
    if (compare->parsed()) return run_compare(compare_args, globals, session);
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
