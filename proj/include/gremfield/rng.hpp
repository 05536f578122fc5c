#pragma once

// Counter-based random numbers. Every variate is a pure function of a
// 64-bit key and a 128-bit counter, so results do not depend on the order in
// which threads visit the configuration tree.

#include <array>
#include <cstdint>

namespace gremfield {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds.
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

inline PhiloxKey make_key(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// SplitMix64 finaliser, used to derive per-replica seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the disorder of replica `replica` in a run seeded with `seed`.
std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica);

/// Uniform in (0, 1), never 0 or 1 (52 random bits).
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Identifies one i.i.d. Gaussian of the hierarchy: the level (1-based) and
/// the packed spin prefix sigma^(1)...sigma^(k), first spin most significant,
/// bit 1 meaning spin -1.
struct DisorderAddress {
  int level = 1;
  std::uint64_t path = 0;
};

/// Box-Muller pair attached to the sibling pair (level, path >> 1).
struct GaussianPair {
  double even;  // path with lowest bit 0
  double odd;   // path with lowest bit 1
};

GaussianPair disorder_gaussian_pair(std::uint64_t seed, int level, std::uint64_t pair_index);

/// Standard normal at `addr`; deterministic in (seed, addr).
double disorder_gaussian(std::uint64_t seed, DisorderAddress addr);

/// Unit exponential variate for the point-process samplers: stream `level`,
/// node `node`, draw `index`.
double cascade_exponential(std::uint64_t seed, std::uint32_t level, std::uint32_t node,
                           std::uint32_t index);

}  // namespace gremfield
