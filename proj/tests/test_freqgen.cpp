#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <vector>

#include "cori/error.hpp"
#include "cori/freqgen.hpp"
#include "cori/rng.hpp"

using namespace cori;

namespace {

ReuseHistogram hist_requests(const std::vector<std::pair<double, std::uint64_t>>& bins) {
  ReuseHistogram hist;
  hist.domain = ReuseDomain::requests;
  for (const auto& [reuse, count] : bins) {
    hist.bins.push_back({reuse, count});
    hist.total_observations += count;
  }
  return hist;
}

}  // namespace

TEST_CASE("dominant reuse: single bin returns its value") {
  const DominantReuse dr = dominant_reuse(hist_requests({{500, 10}}));
  CHECK(dr.value == 500.0);
  CHECK(dr.num == 500);
  CHECK(dr.den == 1);
}

TEST_CASE("dominant reuse: rank-weighted average, exactly") {
  // weights (N-i): 2,1,0 -> (2*5*10 + 1*2*100) / (2*5 + 1*2) = 300/12 = 25
  const DominantReuse dr = dominant_reuse(hist_requests({{10, 5}, {100, 2}, {1000, 1}}));
  CHECK(dr.value == 25.0);
  CHECK(dr.num == 25);
  CHECK(dr.den == 1);
}

TEST_CASE("dominant reuse: with two bins all weight sits on the shorter") {
  const DominantReuse dr = dominant_reuse(hist_requests({{10, 1}, {20, 1}}));
  CHECK(dr.value == 10.0);
}

TEST_CASE("dominant reuse is scale-invariant in the counts") {
  const auto base = hist_requests({{7, 3}, {40, 9}, {160, 2}, {900, 5}});
  const DominantReuse dr = dominant_reuse(base);
  for (const std::uint64_t scale : {2ull, 10ull, 1000ull}) {
    auto scaled = base;
    for (ReuseBin& bin : scaled.bins) bin.count *= scale;
    const DominantReuse dr2 = dominant_reuse(scaled);
    CHECK(dr2.num == dr.num);
    CHECK(dr2.den == dr.den);
    CHECK(dr2.value == dr.value);
  }
}

TEST_CASE("dominant reuse stays within the histogram range") {
  Xorshift64Star rng(123);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::pair<double, std::uint64_t>> bins;
    double reuse = static_cast<double>(rng.next_below(50));
    const int n = 1 + static_cast<int>(rng.next_below(8));
    for (int i = 0; i < n; ++i) {
      bins.emplace_back(reuse, 1 + rng.next_below(1000));
      reuse += 1.0 + static_cast<double>(rng.next_below(500));
    }
    const auto hist = hist_requests(bins);
    const DominantReuse dr = dominant_reuse(hist);
    CHECK(dr.value >= hist.bins.front().reuse);
    CHECK(dr.value <= hist.bins.back().reuse);
  }
  CHECK_THROWS_AS(dominant_reuse(ReuseHistogram{}), InvalidArgument);
}

TEST_CASE("cori candidates: multiples of the dominant reuse up to half the runtime") {
  DominantReuse dr;
  dr.value = 25.0;
  dr.num = 25;
  dr.den = 1;
  const CandidateSet set = cori_candidates(dr, 130.0);
  CHECK(set.periods == std::vector<double>{25, 50, 65});
  CHECK(set.domain == ReuseDomain::requests);
  CHECK(set.source == CandidateSource::cori);
  CHECK(!set.degenerate_warning);
}

TEST_CASE("cori candidates: terminal handling") {
  DominantReuse dr;
  dr.value = 30.0;
  dr.num = 30;
  dr.den = 1;
  CHECK(cori_candidates(dr, 60.0).periods == std::vector<double>{30});  // DR == runtime/2

  dr.value = 10.0;
  dr.num = 10;
  dr.den = 1;
  // 30 is both a multiple and the terminal; it appears once.
  CHECK(cori_candidates(dr, 60.0).periods == std::vector<double>{10, 20, 30});

  dr.value = 40.0;
  dr.num = 40;
  dr.den = 1;
  const CandidateSet degenerate = cori_candidates(dr, 60.0);
  CHECK(degenerate.periods == std::vector<double>{30});
  CHECK(degenerate.degenerate_warning);
}

TEST_CASE("baseline candidates and their orderings") {
  const CandidateSet right = baseline_candidates(10, 60, CandidateSource::base_right);
  CHECK(right.periods == std::vector<double>{10, 20, 30});

  const CandidateSet left = baseline_candidates(10, 60, CandidateSource::base_left);
  CHECK(left.periods == std::vector<double>{30, 20, 10});

  const CandidateSet random = baseline_candidates(10, 60, CandidateSource::base_random, 7);
  std::vector<double> sorted = random.periods;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<double>{10, 20, 30});
  // Stable across runs.
  CHECK(baseline_candidates(10, 60, CandidateSource::base_random, 7).periods == random.periods);

  CHECK_THROWS_AS(baseline_candidates(10, 60, CandidateSource::cori), InvalidArgument);
}

TEST_CASE("every non-terminal candidate is an exact multiple; terminals agree") {
  DominantReuse dr;
  dr.value = 17.0;
  dr.num = 17;
  dr.den = 1;
  const double runtime = 1000.0;
  const CandidateSet cori_set = cori_candidates(dr, runtime);
  const CandidateSet base = baseline_candidates(13, runtime, CandidateSource::base_right);

  for (std::size_t i = 0; i + 1 < cori_set.periods.size(); ++i) {
    CHECK(static_cast<std::uint64_t>(cori_set.periods[i]) % 17 == 0);
  }
  for (std::size_t i = 0; i + 1 < base.periods.size(); ++i) {
    CHECK(static_cast<std::uint64_t>(base.periods[i]) % 13 == 0);
  }
  CHECK(cori_set.periods.back() == 500.0);
  CHECK(base.periods.back() == 500.0);
}

TEST_CASE("seconds-domain candidates map onto request counts") {
  CandidateSet set;
  set.domain = ReuseDomain::seconds;
  set.periods = {1.0, 0.01, 0.25};
  const CandidateSet requests = to_request_domain(set, 10000.0);
  CHECK(requests.periods == std::vector<double>{10000, 100, 2500});
  CHECK(requests.domain == ReuseDomain::requests);

  // Sub-resolution periods clamp to one request.
  CandidateSet tiny;
  tiny.domain = ReuseDomain::seconds;
  tiny.periods = {1e-9};
  CHECK(to_request_domain(tiny, 10000.0).periods == std::vector<double>{1});

  CHECK_THROWS_AS(to_request_domain(requests, 10000.0), InvalidArgument);
}

TEST_CASE("seconds-domain generation works end to end") {
  ReuseHistogram hist;
  hist.domain = ReuseDomain::seconds;
  hist.bins = {{0.5, 15}, {2.0, 3}};
  hist.total_observations = 18;
  const DominantReuse dr = dominant_reuse(hist);
  CHECK(dr.domain == ReuseDomain::seconds);
  CHECK(dr.value == doctest::Approx(0.5));  // all weight on the shorter bin

  const CandidateSet set = cori_candidates(dr, 4.0);
  REQUIRE(set.periods.size() == 4);
  CHECK(set.periods[0] == doctest::Approx(0.5));
  CHECK(set.periods.back() == doctest::Approx(2.0));
}

TEST_CASE("candidates CSV schema") {
  const CandidateSet set = baseline_candidates(10, 60, CandidateSource::base_left);
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "cori_freqgen_candidates.csv";
  save_candidates_csv(set, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "rank,period,domain,source");
  std::getline(in, line);
  CHECK(line == "1,30,requests,base-left");
}
