#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace bestsubset {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child stream key from a parent key and a list of indices.
/// Deterministic and independent of evaluation order, so per-replicate
/// streams do not depend on how work is scheduled across threads.
std::uint64_t derive_key(std::uint64_t parent, std::initializer_list<std::uint64_t> path);

/// xoshiro256** seeded from a 64-bit key through SplitMix64.
/// Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Unit-rate exponential variate.
  double exponential();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace bestsubset
