#pragma once

#include <filesystem>
#include <string>

#include "cori/memsim.hpp"
#include "cori/scheduler.hpp"

namespace cori {

// Memory model plus scheduler settings as read from one "key = value" file.
struct SessionFileConfig {
  HybridMemoryConfig memory;
  SchedulerSpec scheduler;
};

// Accepts blank lines and '#' comments. Keys are exactly the field names of
// HybridMemoryConfig (fast_capacity_fraction, fast_latency_ns,
// slow_latency_multiplier, fast_bandwidth_bytes_per_s, slow_bandwidth_fraction,
// per_migration_delay_ns, per_period_overhead_ns, requests_per_second,
// migration_overlap_fraction) and of SchedulerSpec (kind, history_periods,
// hotness_mode, ema_smoothing, ema_threshold). Unknown keys raise an error
// naming the key.
SessionFileConfig load_config_file(const std::filesystem::path& path);

// Applies a single key=value pair; used by the file loader and by tests.
void apply_config_entry(SessionFileConfig& config, const std::string& key,
                        const std::string& value);

// Shared CSV float formatting ("%.12g"): compact, full precision for the
// value ranges used here, stable across reruns.
std::string format_double(double value);

}  // namespace cori
