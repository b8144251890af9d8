#pragma once

#include <cstdint>
#include <random>

namespace qmb {

/// splitmix64 step; the usual seeding workhorse.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Pure function (seed, index) -> stream seed, so sample `index` is
/// reproducible regardless of evaluation order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= index * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull;
  return a ^ splitmix64(s);
}

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(derive_stream(seed, index));
}

/// Uniform double in [0,1) from the top 53 bits of a splitmix64 draw.
inline double uniform_unit(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace qmb
