#pragma once

#include <cstdint>
#include <random>

namespace reserve {

using Engine = std::mt19937_64;

// Well-known substream ids used under one master seed.
namespace stream {
inline constexpr std::uint64_t kSuitability = 1;
inline constexpr std::uint64_t kCost = 2;
inline constexpr std::uint64_t kSolver = 3;
inline constexpr std::uint64_t kEvaluation = 4;
}  // namespace stream

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of substream `index` under `master`. Distinct indices give
// statistically independent engines.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

inline Engine make_engine(std::uint64_t master, std::uint64_t index) {
  return Engine(derive_seed(master, index));
}

// Uniform on [0,1) from the top 53 bits; independent of the standard library's
// distribution implementation so generated rasters are portable.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace reserve
