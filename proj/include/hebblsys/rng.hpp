#pragma once

#include <cstdint>
#include <random>

namespace hebblsys {

using Rng = std::mt19937_64;

/// Purpose tags for derived streams.
enum class StreamPurpose : std::uint64_t { FoodScatter = 0, Spawn = 1, Reproduction = 2, Init = 3 };

/// splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for the stream identified by (run_seed, generation, index, purpose).
/// Each field is folded in through its own finalizer round so that streams
/// depend only on their coordinates, never on evaluation order.
constexpr std::uint64_t stream_seed(std::uint64_t run_seed, std::uint64_t generation, std::uint64_t index,
                                    StreamPurpose purpose) {
  std::uint64_t h = splitmix64(run_seed);
  h = splitmix64(h ^ generation);
  h = splitmix64(h ^ index);
  return splitmix64(h ^ static_cast<std::uint64_t>(purpose));
}

inline Rng make_stream(std::uint64_t run_seed, std::uint64_t generation, std::uint64_t index, StreamPurpose purpose) {
  return Rng{stream_seed(run_seed, generation, index, purpose)};
}

inline bool bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

/// Uniform integer in [lo, hi].
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace hebblsys
