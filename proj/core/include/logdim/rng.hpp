#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace logdim {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Substream seed derivation: hash(master, tag, a, b).
///
/// Every random decision in the toolkit draws from a stream seeded this way,
/// so a single cell of a large run (say sample 17 of dimension 5) can be
/// reproduced in isolation from the master seed alone.
Seed derive_seed(Seed master, std::string_view tag, std::uint64_t a = 0,
                 std::uint64_t b = 0) noexcept;

/// Uniform double in [0,1) from the top 53 bits of a word.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(Rng& rng) { return to_unit(rng()); }

/// Uniform integer in [0, bound). bound must be positive.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

}  // namespace logdim
