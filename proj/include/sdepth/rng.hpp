#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace sdepth {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for an independent stream keyed by (master, k1, k2, ...).
inline std::uint64_t substream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

inline std::uint64_t hash_coords(std::span<const double> x) {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (double v : x) {
    // +0.0 and -0.0 hash alike.
    const double c = v == 0.0 ? 0.0 : v;
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(c));
  }
  return h;
}

// Fair coin keyed by a seed and a point; true with probability 1/2.
inline bool seeded_coin(std::uint64_t seed, std::span<const double> x) {
  return (splitmix64(seed ^ hash_coords(x)) >> 63) != 0;
}

}  // namespace sdepth
