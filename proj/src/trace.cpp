#include "cori/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "cori/error.hpp"
#include "cori/rng.hpp"

namespace cori {

namespace {

void rstrip(std::string& s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.pop_back();
  }
}

std::uint64_t parse_u64(const std::string& field, const std::filesystem::path& file,
                        std::size_t line, int base = 10) {
  std::uint64_t value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value, base);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ParseError(file.string(), line, "malformed number '" + field + "'");
  }
  return value;
}

}  // namespace

AccessTrace canonicalize_trace(const std::vector<std::uint64_t>& raw_ids,
                               std::uint64_t page_size_bytes) {
  AccessTrace out;
  out.page_size_bytes = page_size_bytes;
  out.accesses.reserve(raw_ids.size());
  std::unordered_map<std::uint64_t, PageId> dense;
  dense.reserve(raw_ids.size() / 4 + 16);
  for (std::uint64_t raw : raw_ids) {
    auto [it, inserted] = dense.try_emplace(raw, static_cast<PageId>(out.original_page_ids.size()));
    if (inserted) out.original_page_ids.push_back(raw);
    out.accesses.push_back(it->second);
  }
  out.footprint_pages = static_cast<std::uint32_t>(out.original_page_ids.size());
  return out;
}

AccessTrace load_trace(const std::filesystem::path& path, TraceFormat format,
                       std::uint64_t page_size_bytes) {
  if (page_size_bytes == 0) throw InvalidArgument("load_trace: page_size_bytes must be > 0");
  std::ifstream in(path);
  if (!in) throw FileError("cannot open trace file: " + path.string());

  std::vector<std::uint64_t> raw;
  std::string line;
  std::size_t lineno = 0;

  if (format == TraceFormat::hex_address) {
    while (std::getline(in, line)) {
      ++lineno;
      rstrip(line);
      if (line.empty()) throw ParseError(path.string(), lineno, "empty line");
      if (line.size() < 3 || line[0] != '0' || (line[1] != 'x' && line[1] != 'X')) {
        throw ParseError(path.string(), lineno, "expected 0x-prefixed hex address, got '" + line + "'");
      }
      std::uint64_t address = parse_u64(line.substr(2), path, lineno, 16);
      raw.push_back(address / page_size_bytes);
    }
  } else {
    if (!std::getline(in, line)) throw Error("empty trace file: " + path.string());
    ++lineno;
    rstrip(line);
    if (line != "index,page") {
      throw ParseError(path.string(), lineno, "expected header 'index,page', got '" + line + "'");
    }
    std::uint64_t expected_index = 0;
    while (std::getline(in, line)) {
      ++lineno;
      rstrip(line);
      if (line.empty()) throw ParseError(path.string(), lineno, "empty line");
      std::size_t comma = line.find(',');
      if (comma == std::string::npos) {
        throw ParseError(path.string(), lineno, "expected 'index,page' row, got '" + line + "'");
      }
      std::uint64_t index = parse_u64(line.substr(0, comma), path, lineno);
      std::uint64_t page = parse_u64(line.substr(comma + 1), path, lineno);
      if (index != expected_index) {
        throw ParseError(path.string(), lineno,
                         "index must increase from 0; expected " + std::to_string(expected_index));
      }
      ++expected_index;
      raw.push_back(page);
    }
  }

  if (raw.empty()) throw Error("empty trace file: " + path.string());
  return canonicalize_trace(raw, page_size_bytes);
}

void save_trace(const AccessTrace& trace, const std::filesystem::path& path,
                TraceFormat format) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write trace file: " + path.string());
  char buf[64];
  if (format == TraceFormat::hex_address) {
    for (PageId page : trace.accesses) {
      std::uint64_t address = static_cast<std::uint64_t>(page) * trace.page_size_bytes;
      std::snprintf(buf, sizeof buf, "0x%llx\n", static_cast<unsigned long long>(address));
      out << buf;
    }
  } else {
    out << "index,page\n";
    for (std::size_t i = 0; i < trace.accesses.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%u\n", i, trace.accesses[i]);
      out << buf;
    }
  }
  if (!out) throw FileError("failed writing trace file: " + path.string());
}

void save_page_mapping(const AccessTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write mapping file: " + path.string());
  out << "canonical_page,original_page\n";
  for (std::size_t i = 0; i < trace.original_page_ids.size(); ++i) {
    out << i << ',' << trace.original_page_ids[i] << '\n';
  }
  if (!out) throw FileError("failed writing mapping file: " + path.string());
}

AccessTrace generate_synthetic(SyntheticKind kind, std::uint32_t pages,
                               std::uint32_t repeats, std::uint64_t seed) {
  if (pages < 1) throw InvalidArgument("generate_synthetic: pages must be >= 1");
  if (repeats < 1) throw InvalidArgument("generate_synthetic: repeats must be >= 1");

  std::vector<std::uint64_t> raw;
  switch (kind) {
    case SyntheticKind::strided:
      raw.reserve(static_cast<std::size_t>(pages) * repeats);
      for (std::uint32_t r = 0; r < repeats; ++r) {
        for (std::uint32_t p = 0; p < pages; ++p) raw.push_back(p);
      }
      break;

    case SyntheticKind::triangular:
      if (repeats > pages) {
        throw InvalidArgument("generate_synthetic: triangular requires repeats <= pages");
      }
      for (std::uint32_t k = 0; k < repeats; ++k) {
        for (std::uint32_t p = 0; p + k < pages; ++p) raw.push_back(p);
      }
      break;

    case SyntheticKind::random_uniform: {
      Xorshift64Star rng(seed);
      const std::size_t total = static_cast<std::size_t>(pages) * repeats;
      raw.reserve(total);
      for (std::size_t i = 0; i < total; ++i) raw.push_back(rng.next_below(pages));
      break;
    }

    case SyntheticKind::cyclic_phases: {
      if (pages < 2) throw InvalidArgument("generate_synthetic: cyclic-phases requires pages >= 2");
      const std::uint32_t half = (pages + 1) / 2;
      for (std::uint32_t phase = 0; phase < repeats; ++phase) {
        const std::uint32_t begin = (phase % 2 == 0) ? 0 : half;
        const std::uint32_t end = (phase % 2 == 0) ? half : pages;
        for (std::uint32_t sweep = 0; sweep < kCyclicSweepsPerPhase; ++sweep) {
          for (std::uint32_t p = begin; p < end; ++p) raw.push_back(p);
        }
      }
      break;
    }
  }

  return canonicalize_trace(raw, 4096);
}

TraceStats compute_stats(const AccessTrace& trace) {
  if (trace.empty()) throw InvalidArgument("compute_stats: trace is empty");
  TraceStats stats;
  stats.total_requests = trace.total_requests();
  stats.distinct_pages = trace.footprint_pages;
  stats.footprint_bytes = static_cast<std::uint64_t>(trace.footprint_pages) * trace.page_size_bytes;
  return stats;
}

TraceFormat parse_trace_format(const std::string& name) {
  if (name == "hex-address") return TraceFormat::hex_address;
  if (name == "page-csv") return TraceFormat::page_csv;
  throw InvalidArgument("unknown trace format '" + name + "' (expected hex-address or page-csv)");
}

const char* trace_format_name(TraceFormat format) {
  return format == TraceFormat::hex_address ? "hex-address" : "page-csv";
}

SyntheticKind parse_synthetic_kind(const std::string& name) {
  if (name == "strided") return SyntheticKind::strided;
  if (name == "triangular") return SyntheticKind::triangular;
  if (name == "random") return SyntheticKind::random_uniform;
  if (name == "cyclic-phases") return SyntheticKind::cyclic_phases;
  throw InvalidArgument("unknown synthetic kind '" + name + "'");
}

const char* synthetic_kind_name(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::strided: return "strided";
    case SyntheticKind::triangular: return "triangular";
    case SyntheticKind::random_uniform: return "random";
    case SyntheticKind::cyclic_phases: return "cyclic-phases";
  }
  return "?";
}

std::optional<SyntheticSpec> try_parse_synthetic_spec(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const std::string kind_name = text.substr(0, colon);
  SyntheticKind kind;
  try {
    kind = parse_synthetic_kind(kind_name);
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }

  std::string rest = text.substr(colon + 1);
  std::optional<std::uint64_t> seed;
  if (std::size_t second = rest.find(':'); second != std::string::npos) {
    const std::string seed_text = rest.substr(second + 1);
    rest = rest.substr(0, second);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), value);
    if (ec != std::errc{} || ptr != seed_text.data() + seed_text.size() || seed_text.empty()) {
      return std::nullopt;
    }
    seed = value;
  }

  const std::size_t x = rest.find('x');
  if (x == std::string::npos) return std::nullopt;
  const std::string pages_text = rest.substr(0, x);
  const std::string repeats_text = rest.substr(x + 1);
  std::uint32_t pages = 0, repeats = 0;
  auto [pp, pe] = std::from_chars(pages_text.data(), pages_text.data() + pages_text.size(), pages);
  auto [rp, re] = std::from_chars(repeats_text.data(), repeats_text.data() + repeats_text.size(), repeats);
  if (pe != std::errc{} || pp != pages_text.data() + pages_text.size() || pages_text.empty()) {
    return std::nullopt;
  }
  if (re != std::errc{} || rp != repeats_text.data() + repeats_text.size() || repeats_text.empty()) {
    return std::nullopt;
  }

  SyntheticSpec spec;
  spec.kind = kind;
  spec.pages = pages;
  spec.repeats = repeats;
  spec.seed = seed;
  return spec;
}

TraceFormat detect_trace_format(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open trace file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty trace file: " + path.string());
  rstrip(line);
  if (line.rfind("0x", 0) == 0 || line.rfind("0X", 0) == 0) return TraceFormat::hex_address;
  if (line == "index,page") return TraceFormat::page_csv;
  throw Error("cannot detect trace format of " + path.string() +
              " (expected a 0x address or an 'index,page' header)");
}

}  // namespace cori
