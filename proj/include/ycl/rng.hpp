#pragma once

#include <cstdint>

namespace ycl {

// SplitMix64 step; a counter-based generator when driven by hashed indices.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform [0,1) draw for (seed, sample, site) without any sequential state;
// per-site draws are independent given distinct index triples, and the same
// triple always yields the same value regardless of evaluation order.
inline double counter_uniform01(std::uint64_t seed, std::uint64_t sample, std::uint64_t site) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(sample ^ splitmix64(site + 0x51ed2701)));
  return (h >> 11) * 0x1.0p-53;
}

}  // namespace ycl
