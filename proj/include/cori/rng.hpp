#pragma once

#include <cstdint>
#include <cstddef>
#include <utility>
#include <vector>

namespace cori {

// xorshift64* generator. The recurrence is fixed so that seeded runs replay
// bit-identically across platforms and compilers:
//
//   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;
//   output = x * 0x2545F4914F6CDD1D
//
// The user seed is passed through one splitmix64 finalizer step before use,
// so small consecutive seeds still produce unrelated streams.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed) noexcept : state_(mix(seed)) {
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ull;
  }

  std::uint64_t next() noexcept {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }

  // Draw from [0, bound) via the multiply-high mapping. bound must be >= 1.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

// Fisher-Yates shuffle driven by the pinned generator, high index down.
template <typename T>
void deterministic_shuffle(std::vector<T>& values, Xorshift64Star& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[rng.next_below(i)]);
  }
}

}  // namespace cori
