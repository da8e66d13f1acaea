#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace sdepth {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

// Saturating multiply.
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

// C(n, k), saturating at kSaturated.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(r);
}

// Number of distinct simplices in the reduced distribution-enlarged enumeration:
// choose (d+1)^2 indices, d+1 leaders among them, then split the remaining d(d+1)
// into d+1 labeled groups of size d.
inline std::uint64_t full_enlarged_simplex_count(std::uint64_t n, std::uint64_t d) {
  const std::uint64_t p = d + 1, used = p * p;
  if (n < used) return 0;
  std::uint64_t count = sat_mul(binomial(n, used), binomial(used, p));
  // (p^2 - p)! / (d!)^p as a product of binomials C(rest, d).
  std::uint64_t rest = used - p;
  for (std::uint64_t g = 0; g < p; ++g) {
    count = sat_mul(count, binomial(rest, d));
    rest -= d;
  }
  return count;
}

// Lexicographic k-combination of {0..n-1} with the given rank.
inline void unrank_combination(std::uint64_t n, std::uint64_t rank, std::span<std::size_t> out) {
  const std::size_t k = out.size();
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (;; ++v) {
      const std::uint64_t c = binomial(n - v - 1, k - i - 1);
      if (rank < c) break;
      rank -= c;
    }
    out[i] = static_cast<std::size_t>(v++);
  }
}

// Advances to the next lexicographic combination; false when exhausted.
inline bool next_combination(std::size_t n, std::span<std::size_t> c) {
  const std::size_t k = c.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Leader/group layout over the positions 0..(d+1)^2-1 of an ascending index
// subset. leaders holds d+1 positions (ascending); groups holds (d+1)*d positions,
// group g occupying [g*d, (g+1)*d) and belonging to leaders[g].
struct LeaderPattern {
  std::vector<std::uint8_t> leaders;
  std::vector<std::uint8_t> groups;
};

// Enumerates every leader choice and labeled group split exactly once.
inline std::vector<LeaderPattern> leader_patterns(std::size_t d) {
  const std::size_t p = d + 1, used = p * p;
  std::vector<LeaderPattern> out;
  std::vector<std::size_t> lead(p);
  for (std::size_t i = 0; i < p; ++i) lead[i] = i;
  do {
    std::vector<std::uint8_t> is_leader(used, 0);
    for (auto l : lead) is_leader[l] = 1;
    std::vector<std::uint8_t> rest;
    for (std::size_t i = 0; i < used; ++i)
      if (!is_leader[i]) rest.push_back(static_cast<std::uint8_t>(i));

    std::vector<std::uint8_t> groups(p * d);
    std::vector<std::size_t> fill(p, 0);
    // Assign rest[j] (ascending) to any group with room; positions within a
    // group stay ascending, so each labeled split appears once.
    auto assign = [&](auto&& self, std::size_t j) -> void {
      if (j == rest.size()) {
        LeaderPattern pat;
        for (auto l : lead) pat.leaders.push_back(static_cast<std::uint8_t>(l));
        pat.groups = groups;
        out.push_back(std::move(pat));
        return;
      }
      for (std::size_t g = 0; g < p; ++g) {
        if (fill[g] == d) continue;
        groups[g * d + fill[g]] = rest[j];
        ++fill[g];
        self(self, j + 1);
        --fill[g];
      }
    };
    assign(assign, 0);
  } while (next_combination(used, lead));
  return out;
}

}  // namespace sdepth
