#include "gremfield/rng.hpp"

#include <cmath>

namespace gremfield {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;
constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;

// Counter word 3 separates the generator families.
constexpr std::uint32_t kDisorderDomain = 0x47u << 24;
constexpr std::uint32_t kCascadeDomain = 0x50u << 24;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeylA;
      k[1] += kWeylB;
    }
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMulA, c[0], lo0, hi0);
    mulhilo(kMulB, c[2], lo1, hi1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
  return mix64(seed ^ mix64(replica + 0x5DEECE66Dull));
}

GaussianPair disorder_gaussian_pair(std::uint64_t seed, int level, std::uint64_t pair_index) {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(pair_index),
                          static_cast<std::uint32_t>(pair_index >> 32),
                          static_cast<std::uint32_t>(level), kDisorderDomain};
  const PhiloxCounter out = philox4x32(ctr, make_key(seed));
  const double u1 = to_open_unit(out[0], out[1]);
  const double u2 = to_open_unit(out[2], out[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * 3.14159265358979323846 * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double disorder_gaussian(std::uint64_t seed, DisorderAddress addr) {
  const GaussianPair pair = disorder_gaussian_pair(seed, addr.level, addr.path >> 1);
  return (addr.path & 1u) ? pair.odd : pair.even;
}

double cascade_exponential(std::uint64_t seed, std::uint32_t level, std::uint32_t node,
                           std::uint32_t index) {
  const PhiloxCounter ctr{index, node, level, kCascadeDomain};
  const PhiloxCounter out = philox4x32(ctr, make_key(seed));
  return -std::log(to_open_unit(out[0], out[1]));
}

}  // namespace gremfield
