#include "cori/config_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "cori/error.hpp"

namespace cori {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  std::size_t end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double parsed = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty()) {
    throw Error("config key '" + key + "': malformed number '" + value + "'");
  }
  return parsed;
}

std::uint32_t parse_u32(const std::string& key, const std::string& value) {
  std::uint32_t parsed = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
    throw Error("config key '" + key + "': malformed integer '" + value + "'");
  }
  return parsed;
}

}  // namespace

void apply_config_entry(SessionFileConfig& config, const std::string& key,
                        const std::string& value) {
  HybridMemoryConfig& mem = config.memory;
  SchedulerSpec& sched = config.scheduler;

  if (key == "fast_capacity_fraction") {
    mem.fast_capacity_fraction = parse_number(key, value);
  } else if (key == "fast_latency_ns") {
    mem.fast_latency_ns = parse_number(key, value);
  } else if (key == "slow_latency_multiplier") {
    mem.slow_latency_multiplier = parse_number(key, value);
  } else if (key == "fast_bandwidth_bytes_per_s") {
    mem.fast_bandwidth_bytes_per_s = parse_number(key, value);
  } else if (key == "slow_bandwidth_fraction") {
    mem.slow_bandwidth_fraction = parse_number(key, value);
  } else if (key == "per_migration_delay_ns") {
    mem.per_migration_delay_ns = parse_number(key, value);
  } else if (key == "per_period_overhead_ns") {
    mem.per_period_overhead_ns = parse_number(key, value);
  } else if (key == "requests_per_second") {
    mem.requests_per_second = parse_number(key, value);
  } else if (key == "migration_overlap_fraction") {
    mem.migration_overlap_fraction = parse_number(key, value);
  } else if (key == "kind") {
    sched.kind = parse_scheduler_kind(value);
  } else if (key == "history_periods") {
    sched.history_periods = parse_u32(key, value);
  } else if (key == "hotness_mode") {
    sched.hotness_mode = parse_hotness_mode(value);
  } else if (key == "ema_smoothing") {
    sched.ema_smoothing = parse_number(key, value);
  } else if (key == "ema_threshold") {
    sched.ema_threshold = parse_number(key, value);
  } else {
    throw Error("unknown config key '" + key + "'");
  }
}

SessionFileConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open config file: " + path.string());

  SessionFileConfig config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path.string(), lineno, "expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      apply_config_entry(config, key, value);
    } catch (const Error& e) {
      throw ParseError(path.string(), lineno, e.what());
    }
  }
  config.memory.validate();
  config.scheduler.validate();
  return config;
}

std::string format_double(double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace cori
