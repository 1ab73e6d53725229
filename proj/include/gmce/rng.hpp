#pragma once

#include <cstdint>
#include <random>

namespace gmce {

/// One SplitMix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Counter-based seed derivation. The base seed is absorbed first, then each
/// counter in order, every step passing through the SplitMix64 finalizer, so
/// (base, a, b) tuples that differ anywhere map to unrelated 64-bit seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) noexcept;

/// Standard normal draws with a mapping from seed to stream that is fixed by
/// this library, not by the standard library implementation: the engine is
/// std::mt19937_64 seeded with the 64-bit seed (fully specified by the C++
/// standard), each uniform is (bits >> 11) + 0.5 scaled by 2^-53, and pairs of
/// uniforms go through the Box-Muller transform (cosine branch first).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  double uniform();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gmce
