#pragma once

#include <cstdint>

namespace hofa {

/// SplitMix64 finaliser; used to derive independent per-stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic pseudo-random stream (xoshiro256**), reproducible across
/// platforms because bounded draws use explicit rejection sampling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Stream for trial `index` of a run seeded with `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1).
  double uniform();

 private:
  std::uint64_t s_[4];
};

}  // namespace hofa
