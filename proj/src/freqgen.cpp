#include "cori/freqgen.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "cori/config_io.hpp"
#include "cori/error.hpp"
#include "cori/rng.hpp"

namespace cori {

namespace {

using u128 = unsigned __int128;

u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Upper bound on generated candidates; only absurd timestep/runtime
// combinations can reach it.
constexpr std::size_t kMaxCandidates = 100'000'000;

std::vector<double> requests_domain_sequence(std::uint64_t step, std::uint64_t runtime) {
  if (runtime < 2) throw InvalidArgument("candidate generation: runtime must be >= 2 requests");
  const std::uint64_t half = runtime / 2;
  std::vector<double> periods;
  for (std::uint64_t k = 1; k * step < half; ++k) {
    if (periods.size() >= kMaxCandidates) {
      throw InvalidArgument("candidate generation: step too small for runtime");
    }
    periods.push_back(static_cast<double>(k * step));
  }
  periods.push_back(static_cast<double>(half));
  return periods;
}

std::vector<double> seconds_domain_sequence(double step, double runtime) {
  if (!(runtime > 0.0)) throw InvalidArgument("candidate generation: runtime must be > 0");
  const double half = runtime / 2.0;
  std::vector<double> periods;
  for (std::uint64_t k = 1; static_cast<double>(k) * step < half * (1.0 - 1e-12); ++k) {
    if (periods.size() >= kMaxCandidates) {
      throw InvalidArgument("candidate generation: step too small for runtime");
    }
    periods.push_back(static_cast<double>(k) * step);
  }
  periods.push_back(half);
  return periods;
}

}  // namespace

DominantReuse dominant_reuse(const ReuseHistogram& hist) {
  const std::size_t n = hist.bins.size();
  if (n == 0) throw InvalidArgument("dominant_reuse: histogram is empty");

  DominantReuse dr;
  dr.domain = hist.domain;

  if (n == 1) {
    // The rank weights vanish for a single bin; the sole reuse value is the
    // only consistent answer.
    dr.value = hist.bins[0].reuse;
    if (hist.domain == ReuseDomain::requests) {
      dr.num = static_cast<std::uint64_t>(std::llround(hist.bins[0].reuse));
      dr.den = 1;
    }
    return dr;
  }

  if (hist.domain == ReuseDomain::requests) {
    // Exact integer arithmetic; note the weight (n - i) gives the last
    // (longest-reuse) bin weight zero by construction.
    u128 num = 0;
    u128 den = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const u128 weight = static_cast<u128>(n - 1 - i) * hist.bins[i].count;
      num += weight * static_cast<u128>(std::llround(hist.bins[i].reuse));
      den += weight;
    }
    if (den == 0) {
      // All weight-carrying bins had zero count; fall back to the shortest reuse.
      dr.value = hist.bins[0].reuse;
      dr.num = static_cast<std::uint64_t>(std::llround(hist.bins[0].reuse));
      dr.den = 1;
      return dr;
    }
    const u128 g = gcd_u128(num == 0 ? den : num, den);
    num /= g;
    den /= g;
    dr.value = static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
    if (num <= std::numeric_limits<std::uint64_t>::max() &&
        den <= std::numeric_limits<std::uint64_t>::max()) {
      dr.num = static_cast<std::uint64_t>(num);
      dr.den = static_cast<std::uint64_t>(den);
    } else {
      dr.num = 0;
      dr.den = 1;
    }
  } else {
    long double num = 0.0L;
    long double den = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      const long double weight =
          static_cast<long double>(n - 1 - i) * static_cast<long double>(hist.bins[i].count);
      num += weight * static_cast<long double>(hist.bins[i].reuse);
      den += weight;
    }
    dr.value = den > 0.0L ? static_cast<double>(num / den) : hist.bins[0].reuse;
  }
  return dr;
}

CandidateSet cori_candidates(const DominantReuse& dr, double runtime) {
  CandidateSet set;
  set.domain = dr.domain;
  set.source = CandidateSource::cori;
  set.order_note = "ascending-period";

  if (dr.domain == ReuseDomain::requests) {
    // Nearest-integer dominant reuse from the exact rational, minimum 1.
    std::uint64_t dr_requests;
    if (dr.num != 0 || dr.den != 1) {
      const std::uint64_t q = dr.num / dr.den;
      const std::uint64_t r = dr.num % dr.den;
      dr_requests = q + (2 * r >= dr.den ? 1 : 0);
    } else {
      dr_requests = static_cast<std::uint64_t>(std::llround(dr.value));
    }
    if (dr_requests < 1) dr_requests = 1;

    const auto runtime_requests = static_cast<std::uint64_t>(std::llround(runtime));
    if (runtime_requests < 2) throw InvalidArgument("cori_candidates: runtime must be >= 2 requests");
    const std::uint64_t half = runtime_requests / 2;
    if (dr_requests > half) {
      set.periods.push_back(static_cast<double>(half));
      set.degenerate_warning = true;
      return set;
    }
    set.periods = requests_domain_sequence(dr_requests, runtime_requests);
  } else {
    if (!(dr.value > 0.0)) throw InvalidArgument("cori_candidates: dominant reuse must be > 0");
    const double half = runtime / 2.0;
    if (!(half > 0.0)) throw InvalidArgument("cori_candidates: runtime must be > 0");
    if (dr.value > half * (1.0 + 1e-12)) {
      set.periods.push_back(half);
      set.degenerate_warning = true;
      return set;
    }
    set.periods = seconds_domain_sequence(dr.value, runtime);
  }
  return set;
}

CandidateSet baseline_candidates(double timestep, double runtime, CandidateSource ordering,
                                 std::uint64_t seed, ReuseDomain domain) {
  if (ordering == CandidateSource::cori) {
    throw InvalidArgument("baseline_candidates: ordering must be base-left, base-right or base-random");
  }
  if (!(timestep >= 1.0) && domain == ReuseDomain::requests) {
    throw InvalidArgument("baseline_candidates: timestep must be >= 1 request");
  }
  if (!(timestep > 0.0)) throw InvalidArgument("baseline_candidates: timestep must be > 0");

  CandidateSet set;
  set.domain = domain;
  set.source = ordering;

  if (domain == ReuseDomain::requests) {
    const auto runtime_requests = static_cast<std::uint64_t>(std::llround(runtime));
    const auto step = static_cast<std::uint64_t>(std::llround(timestep));
    const std::uint64_t half = runtime_requests / 2;
    if (runtime_requests < 2) throw InvalidArgument("baseline_candidates: runtime must be >= 2 requests");
    if (step > half) {
      set.periods.push_back(static_cast<double>(half));
      set.degenerate_warning = true;
    } else {
      set.periods = requests_domain_sequence(step, runtime_requests);
    }
  } else {
    const double half = runtime / 2.0;
    if (timestep > half * (1.0 + 1e-12)) {
      set.periods.push_back(half);
      set.degenerate_warning = true;
    } else {
      set.periods = seconds_domain_sequence(timestep, runtime);
    }
  }

  switch (ordering) {
    case CandidateSource::base_right:
      set.order_note = "ascending-period";
      break;
    case CandidateSource::base_left:
      std::reverse(set.periods.begin(), set.periods.end());
      set.order_note = "descending-period";
      break;
    case CandidateSource::base_random: {
      Xorshift64Star rng(seed);
      deterministic_shuffle(set.periods, rng);
      set.order_note = "seeded-shuffle";
      set.seed = seed;
      break;
    }
    case CandidateSource::cori:
      break;  // unreachable
  }
  return set;
}

CandidateSet to_request_domain(const CandidateSet& set, double requests_per_second) {
  if (set.domain != ReuseDomain::seconds) {
    throw InvalidArgument("to_request_domain: candidate set is already in the requests domain");
  }
  if (!(requests_per_second > 0.0)) {
    throw InvalidArgument("to_request_domain: requests_per_second must be > 0");
  }
  CandidateSet out = set;
  out.domain = ReuseDomain::requests;
  for (double& period : out.periods) {
    const auto requests = std::max<long long>(1, std::llround(period * requests_per_second));
    period = static_cast<double>(requests);
  }
  return out;
}

void save_candidates_csv(const CandidateSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write candidates: " + path.string());
  out << "rank,period,domain,source\n";
  for (std::size_t i = 0; i < set.periods.size(); ++i) {
    out << (i + 1) << ',' << format_double(set.periods[i]) << ','
        << reuse_domain_name(set.domain) << ',' << candidate_source_name(set.source) << '\n';
  }
  if (!out) throw FileError("failed writing candidates: " + path.string());
}

CandidateSource parse_candidate_source(const std::string& name) {
  if (name == "cori") return CandidateSource::cori;
  if (name == "base-left") return CandidateSource::base_left;
  if (name == "base-right") return CandidateSource::base_right;
  if (name == "base-random") return CandidateSource::base_random;
  throw InvalidArgument("unknown generator '" + name +
                        "' (expected cori, base-left, base-right or base-random)");
}

const char* candidate_source_name(CandidateSource source) {
  switch (source) {
    case CandidateSource::cori: return "cori";
    case CandidateSource::base_left: return "base-left";
    case CandidateSource::base_right: return "base-right";
    case CandidateSource::base_random: return "base-random";
  }
  return "?";
}

}  // namespace cori
