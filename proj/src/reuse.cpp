#include "cori/reuse.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <unordered_map>

#include "cori/config_io.hpp"
#include "cori/error.hpp"

namespace cori {

namespace {

void rstrip(std::string& s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.pop_back();
  }
}

double parse_double_field(const std::string& field, const std::filesystem::path& file,
                          std::size_t line) {
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || field.empty()) {
    throw ParseError(file.string(), line, "malformed number '" + field + "'");
  }
  return value;
}

std::uint64_t parse_count_field(const std::string& field, const std::filesystem::path& file,
                                std::size_t line) {
  char* end = nullptr;
  const unsigned long long value = std::strtoull(field.c_str(), &end, 10);
  if (end != field.c_str() + field.size() || field.empty()) {
    throw ParseError(file.string(), line, "malformed count '" + field + "'");
  }
  return value;
}

ReuseHistogram from_merged(const std::map<double, std::uint64_t>& merged, ReuseDomain domain) {
  ReuseHistogram hist;
  hist.domain = domain;
  hist.bins.reserve(merged.size());
  for (const auto& [reuse, count] : merged) {
    if (count == 0) continue;
    hist.bins.push_back({reuse, count});
    hist.total_observations += count;
  }
  return hist;
}

}  // namespace

ReuseHistogram collect_reuse(const AccessTrace& trace, std::uint64_t bin_width) {
  if (trace.empty()) throw InvalidArgument("collect_reuse: trace is empty");
  if (bin_width < 1) throw InvalidArgument("collect_reuse: bin_width must be >= 1");

  std::vector<std::int64_t> last_seen(trace.footprint_pages, -1);
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < trace.total_requests(); ++i) {
    const PageId page = trace.accesses[i];
    if (last_seen[page] >= 0) {
      const std::uint64_t reuse = i - static_cast<std::uint64_t>(last_seen[page]) - 1;
      ++counts[reuse / bin_width * bin_width];
    }
    last_seen[page] = static_cast<std::int64_t>(i);
  }

  std::map<double, std::uint64_t> merged;
  for (const auto& [bin, count] : counts) merged[static_cast<double>(bin)] = count;
  return from_merged(merged, ReuseDomain::requests);
}

ReuseHistogram import_loop_histogram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open loop histogram: " + path.string());

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw Error("empty loop histogram: " + path.string());
  ++lineno;
  rstrip(line);
  if (line != "duration_seconds,count") {
    throw ParseError(path.string(), lineno, "expected header 'duration_seconds,count'");
  }

  std::map<double, std::uint64_t> merged;
  while (std::getline(in, line)) {
    ++lineno;
    rstrip(line);
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(path.string(), lineno, "expected 'duration_seconds,count' row");
    }
    const double duration = parse_double_field(line.substr(0, comma), path, lineno);
    const std::uint64_t count = parse_count_field(line.substr(comma + 1), path, lineno);
    if (duration < 0.0) throw ParseError(path.string(), lineno, "negative duration");
    merged[duration] += count;
  }
  if (merged.empty()) throw Error("loop histogram has no rows: " + path.string());
  return from_merged(merged, ReuseDomain::seconds);
}

void save_histogram_csv(const ReuseHistogram& hist, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write histogram: " + path.string());
  out << "# domain=" << reuse_domain_name(hist.domain) << '\n';
  out << "reuse,count\n";
  for (const ReuseBin& bin : hist.bins) {
    out << format_double(bin.reuse) << ',' << bin.count << '\n';
  }
  if (!out) throw FileError("failed writing histogram: " + path.string());
}

ReuseHistogram load_histogram_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open histogram: " + path.string());

  std::string line;
  std::size_t lineno = 0;
  std::optional<ReuseDomain> domain;

  if (!std::getline(in, line)) throw Error("empty histogram file: " + path.string());
  ++lineno;
  rstrip(line);
  if (line.rfind("# domain=", 0) == 0) {
    const std::string name = line.substr(9);
    if (name == "requests") {
      domain = ReuseDomain::requests;
    } else if (name == "seconds") {
      domain = ReuseDomain::seconds;
    } else {
      throw ParseError(path.string(), lineno, "unknown domain '" + name + "'");
    }
    if (!std::getline(in, line)) throw Error("histogram has no header: " + path.string());
    ++lineno;
    rstrip(line);
  }
  if (line == "duration_seconds,count") {
    if (!domain) domain = ReuseDomain::seconds;
  } else if (line == "reuse,count") {
    if (!domain) domain = ReuseDomain::requests;
  } else {
    throw ParseError(path.string(), lineno, "expected 'reuse,count' or 'duration_seconds,count' header");
  }

  std::map<double, std::uint64_t> merged;
  while (std::getline(in, line)) {
    ++lineno;
    rstrip(line);
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(path.string(), lineno, "expected two columns");
    const double reuse = parse_double_field(line.substr(0, comma), path, lineno);
    const std::uint64_t count = parse_count_field(line.substr(comma + 1), path, lineno);
    merged[reuse] += count;
  }
  if (merged.empty()) throw Error("histogram has no rows: " + path.string());
  return from_merged(merged, *domain);
}

const char* reuse_domain_name(ReuseDomain domain) {
  return domain == ReuseDomain::requests ? "requests" : "seconds";
}

}  // namespace cori
