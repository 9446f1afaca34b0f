#pragma once

#include <cstdint>
#include <limits>

namespace prealign {

struct RngSpec {
  std::uint64_t seed = 1;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: draw k of substream (seed, index) depends only on
/// (seed, index, k), never on which thread or in what order streams are used.
/// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t index)
      : key_(mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL))), counter_(0) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

inline RngStream rng_substream(const RngSpec& spec, std::uint64_t index) { return RngStream(spec.seed, index); }

}  // namespace prealign
