#pragma once

// Portable seeded randomness.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not (their algorithms are
// implementation-defined), so every draw used for data generation or fold
// assignment goes through the helpers below instead.

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace factorder {

using Engine = std::mt19937_64;

/// Derives an independent engine for a named sub-stream of a seed.
inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
  // splitmix64 finalizer over (seed, stream)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return Engine(z);
}

/// Uniform integer in [0, bound) by rejection; bound must be positive.
inline std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = engine();
    if (r >= threshold) return r % bound;
  }
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Engine& engine, double p) { return uniform_unit(engine) < p; }

/// Fisher-Yates, drawing from the back.
template <typename T>
void shuffle(std::span<T> items, Engine& engine) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(engine, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace factorder
