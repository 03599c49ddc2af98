#pragma once

#include <cstdint>
#include <limits>

namespace decoy {

// SplitMix64 finaliser; a bijective avalanche mix of 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based generator: output i is mix64(key + i * golden), where the key
// is derived from (seed, stream indices). Two streams with different indices
// never share state, so work split by (source, photon-number class) draws the
// same numbers under any schedule.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b = 0,
            std::uint64_t stream_c = 0)
      : key_(mix64(mix64(mix64(seed ^ 0x6A09E667F3BCC909ULL) + stream_a) + stream_b) + stream_c) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace decoy
