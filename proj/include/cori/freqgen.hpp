#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cori/reuse.hpp"

namespace cori {

// The single reuse value that best represents a histogram: a weighted average
// of the bin values where bin i of N gets weight (N - i) * count_i, i.e.
// frequent and short reuses dominate (the last bin gets weight zero; a
// one-bin histogram yields that bin's value). In the requests domain the
// exact reduced rational num/den is kept alongside the double so candidate
// periods can be generated without rounding drift; in the seconds domain
// num/den are left 0/1.
struct DominantReuse {
  double value = 0.0;
  ReuseDomain domain = ReuseDomain::requests;
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};

enum class CandidateSource { cori, base_left, base_right, base_random };

// Ordered period lengths for the tuner to trial. All periods are <= half the
// runtime, and the half-runtime terminal is always the last underlying value.
struct CandidateSet {
  std::vector<double> periods;   // integral values in the requests domain
  ReuseDomain domain = ReuseDomain::requests;
  CandidateSource source = CandidateSource::cori;
  std::string order_note;
  std::uint64_t seed = 0;              // base-random only
  bool degenerate_warning = false;     // dominant reuse exceeded half the runtime
};

DominantReuse dominant_reuse(const ReuseHistogram& hist);

// [DR, 2*DR, 3*DR, ...) strictly below runtime/2, then runtime/2 appended as
// the terminal candidate (never duplicated). Ascending period order, i.e. the
// tuner starts at the highest data-movement frequency. If DR already exceeds
// runtime/2 the set degenerates to [runtime/2] with the warning flag raised.
// runtime must be in the same domain as dr (total requests, or seconds).
CandidateSet cori_candidates(const DominantReuse& dr, double runtime);

// Insight-free grid: multiples of `timestep` with the same half-runtime
// terminal. base_right traverses ascending periods, base_left descending,
// base_random in a seeded permutation (pinned generator, see rng.hpp).
CandidateSet baseline_candidates(double timestep, double runtime,
                                 CandidateSource ordering, std::uint64_t seed = 0,
                                 ReuseDomain domain = ReuseDomain::requests);

// Maps a seconds-domain set to request counts: period * requests_per_second,
// rounded to the nearest integer, minimum 1. Order and source are preserved.
CandidateSet to_request_domain(const CandidateSet& set, double requests_per_second);

// CSV schema: rank,period,domain,source
void save_candidates_csv(const CandidateSet& set, const std::filesystem::path& path);

CandidateSource parse_candidate_source(const std::string& name);
const char* candidate_source_name(CandidateSource source);

}  // namespace cori
