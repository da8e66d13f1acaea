#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "sdepth/combinatorics.hpp"
#include "sdepth/error.hpp"
#include "sdepth/geometry.hpp"
#include "sdepth/parallel.hpp"
#include "sdepth/rng.hpp"
#include "sdepth/sigma_transform.hpp"
#include "sdepth/types.hpp"

namespace sdepth {

enum class DepthMethod { simplicial, simplex_enlarged, dist_enlarged_blocks, dist_enlarged_full };

inline std::string_view to_string(DepthMethod m) {
  switch (m) {
    case DepthMethod::simplicial: return "simplicial";
    case DepthMethod::simplex_enlarged: return "simplex-enlarged";
    case DepthMethod::dist_enlarged_blocks: return "dist-enlarged-blocks";
    case DepthMethod::dist_enlarged_full: return "dist-enlarged-full";
  }
  return "?";
}

inline DepthMethod parse_depth_method(std::string_view s) {
  for (auto m : {DepthMethod::simplicial, DepthMethod::simplex_enlarged, DepthMethod::dist_enlarged_blocks,
                 DepthMethod::dist_enlarged_full})
    if (s == to_string(m)) return m;
  throw InputError("unknown depth method '" + std::string(s) + "'");
}

inline constexpr std::uint64_t kDefaultExactCap = 10'000'000;

struct DepthConfig {
  DepthMethod method = DepthMethod::simplicial;
  SigmaParam sigma{1.0};
  // Monte-Carlo simplex count; absent means exact enumeration.
  std::optional<std::uint64_t> budget;
  std::uint64_t seed = 0;
  GeomTolerance tol{};
  // Largest simplex count enumerated exactly.
  std::uint64_t exact_cap = kDefaultExactCap;
  // Worker cap (0 = hardware concurrency). Never affects results.
  unsigned threads = 0;

  // simplicial ignores sigma.
  double effective_sigma() const { return method == DepthMethod::simplicial ? 1.0 : sigma.value(); }
};

struct DepthValue {
  double value = 0.0;
  bool exact = true;
  std::uint64_t simplices_evaluated = 0;
};

namespace detail {

inline void validate_config(const DepthConfig& cfg) {
  if (cfg.budget && *cfg.budget == 0) throw InputError("depth budget must be >= 1");
}

inline void validate_queries(const Dataset& data, const Dataset& queries) {
  if (queries.empty()) return;
  check_dims(data.dim(), queries.dim(), "depth query");
}

// Fills `out` ((d+1)*d values) with the vertices of simplex number `i` in a
// stream; implementations must be safe to call concurrently from different
// cursors.
//
// A source exposes:
//   std::uint64_t count() const;
//   Cursor cursor(std::uint64_t begin) const;  // Cursor::next(std::span<double>)

// All (d+1)-subsets of the rows, each enlarged by sigma.
class CombinationSource {
 public:
  CombinationSource(const Dataset& data, double sigma)
      : data_(data), sigma_(sigma), k_(data.dim() + 1), count_(binomial(data.size(), k_)) {}

  std::uint64_t count() const { return count_; }

  class Cursor {
   public:
    Cursor(const CombinationSource& src, std::uint64_t begin) : src_(src), idx_(src.k_), raw_(src.k_ * src.data_.dim()) {
      unrank_combination(src.data_.size(), begin, idx_);
    }
    void next(std::span<double> out) {
      const std::size_t d = src_.data_.dim();
      for (std::size_t j = 0; j < src_.k_; ++j) {
        auto r = src_.data_.row(idx_[j]);
        std::copy(r.begin(), r.end(), raw_.begin() + static_cast<std::ptrdiff_t>(j * d));
      }
      enlarge_vertices(raw_, d, src_.sigma_, out);
      next_combination(src_.data_.size(), idx_);
    }

   private:
    const CombinationSource& src_;
    std::vector<std::size_t> idx_;
    std::vector<double> raw_;
  };

  Cursor cursor(std::uint64_t begin) const { return Cursor(*this, begin); }

  const Dataset& data() const { return data_; }
  double sigma() const { return sigma_; }

 private:
  const Dataset& data_;
  double sigma_;
  std::size_t k_;
  std::uint64_t count_;
};

// Explicit list of (d+1)-index tuples (Monte-Carlo draws), each enlarged by sigma.
class TupleListSource {
 public:
  TupleListSource(const Dataset& data, double sigma, std::vector<std::uint32_t> tuples)
      : data_(data), sigma_(sigma), k_(data.dim() + 1), tuples_(std::move(tuples)) {}

  std::uint64_t count() const { return tuples_.size() / k_; }

  class Cursor {
   public:
    Cursor(const TupleListSource& src, std::uint64_t begin) : src_(src), pos_(begin), raw_(src.k_ * src.data_.dim()) {}
    void next(std::span<double> out) {
      const std::size_t d = src_.data_.dim();
      for (std::size_t j = 0; j < src_.k_; ++j) {
        auto r = src_.data_.row(src_.tuples_[pos_ * src_.k_ + j]);
        std::copy(r.begin(), r.end(), raw_.begin() + static_cast<std::ptrdiff_t>(j * d));
      }
      enlarge_vertices(raw_, d, src_.sigma_, out);
      ++pos_;
    }

   private:
    const TupleListSource& src_;
    std::uint64_t pos_;
    std::vector<double> raw_;
  };

  Cursor cursor(std::uint64_t begin) const { return Cursor(*this, begin); }

 private:
  const Dataset& data_;
  double sigma_;
  std::size_t k_;
  std::vector<std::uint32_t> tuples_;
};

// Vertex Y = (sigma + (1-sigma)/p) X_leader + ((1-sigma)/p) sum_partners X_j,
// partners summed in the order given.
inline void full_vertex(const Dataset& data, double sigma, std::size_t leader, std::span<const std::size_t> partners,
                        std::span<double> out) {
  const std::size_t d = data.dim();
  const double p = static_cast<double>(d + 1);
  const double a = sigma + (1.0 - sigma) / p, b = (1.0 - sigma) / p;
  auto xl = data.row(leader);
  for (std::size_t k = 0; k < d; ++k) {
    double s = 0.0;
    for (auto j : partners) s += data.row(j)[k];
    out[k] = a * xl[k] + b * s;
  }
}

// Reduced exact enumeration of the full distribution-enlarged estimator.
class FullExactSource {
 public:
  FullExactSource(const Dataset& data, double sigma)
      : data_(data), sigma_(sigma), d_(data.dim()), used_((d_ + 1) * (d_ + 1)),
        subsets_(binomial(data.size(), used_)), patterns_(leader_patterns(d_)) {}

  std::uint64_t count() const { return subsets_ * patterns_.size(); }

  class Cursor {
   public:
    Cursor(const FullExactSource& src, std::uint64_t begin)
        : src_(src), subset_(src.used_), partners_(src.d_), pattern_(begin % src.patterns_.size()) {
      unrank_combination(src.data_.size(), begin / src.patterns_.size(), subset_);
    }
    void next(std::span<double> out) {
      const auto& pat = src_.patterns_[pattern_];
      const std::size_t d = src_.d_;
      for (std::size_t g = 0; g <= d; ++g) {
        for (std::size_t l = 0; l < d; ++l) partners_[l] = subset_[pat.groups[g * d + l]];
        full_vertex(src_.data_, src_.sigma_, subset_[pat.leaders[g]], partners_, out.subspan(g * d, d));
      }
      if (++pattern_ == src_.patterns_.size()) {
        pattern_ = 0;
        next_combination(src_.data_.size(), subset_);
      }
    }

   private:
    const FullExactSource& src_;
    std::vector<std::size_t> subset_;
    std::vector<std::size_t> partners_;
    std::size_t pattern_;
  };

  Cursor cursor(std::uint64_t begin) const { return Cursor(*this, begin); }

 private:
  const Dataset& data_;
  double sigma_;
  std::size_t d_, used_;
  std::uint64_t subsets_;
  std::vector<LeaderPattern> patterns_;
};

// Monte-Carlo draws of the full estimator: (d+1)^2 distinct indices per draw,
// the first d+1 are leaders, the rest fill the groups in order.
class FullTupleSource {
 public:
  FullTupleSource(const Dataset& data, double sigma, std::vector<std::uint32_t> tuples)
      : data_(data), sigma_(sigma), d_(data.dim()), used_((d_ + 1) * (d_ + 1)), tuples_(std::move(tuples)) {}

  std::uint64_t count() const { return tuples_.size() / used_; }

  class Cursor {
   public:
    Cursor(const FullTupleSource& src, std::uint64_t begin) : src_(src), pos_(begin), partners_(src.d_) {}
    void next(std::span<double> out) {
      const std::size_t d = src_.d_, p = d + 1;
      const std::uint32_t* t = &src_.tuples_[pos_ * src_.used_];
      for (std::size_t g = 0; g < p; ++g) {
        for (std::size_t l = 0; l < d; ++l) partners_[l] = t[p + g * d + l];
        full_vertex(src_.data_, src_.sigma_, t[g], partners_, out.subspan(g * d, d));
      }
      ++pos_;
    }

   private:
    const FullTupleSource& src_;
    std::uint64_t pos_;
    std::vector<std::size_t> partners_;
  };

  Cursor cursor(std::uint64_t begin) const { return Cursor(*this, begin); }

 private:
  const Dataset& data_;
  double sigma_;
  std::size_t d_, used_;
  std::vector<std::uint32_t> tuples_;
};

// `draws` tuples of `k` distinct indices from [0, n), sampled uniformly and
// independently (with replacement across draws) from the seeded stream.
inline std::vector<std::uint32_t> draw_index_tuples(std::size_t n, std::size_t k, std::uint64_t draws,
                                                    std::uint64_t seed) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("dataset too large for Monte-Carlo indexing");
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
  std::vector<std::uint32_t> out;
  out.reserve(draws * k);
  for (std::uint64_t t = 0; t < draws; ++t) {
    const std::size_t base = out.size();
    while (out.size() - base < k) {
      const std::uint32_t c = pick(rng);
      if (std::find(out.begin() + static_cast<std::ptrdiff_t>(base), out.end(), c) == out.end()) out.push_back(c);
    }
  }
  return out;
}

// 1-D exact counting through sorted interval endpoints: the number of closed
// intervals [lo, hi] containing x equals #{lo <= x} - #{hi < x}.
template <class Source>
std::vector<std::uint64_t> count_hits_sorted_1d(const Source& src, const Dataset& queries, GeomTolerance tol) {
  const std::uint64_t total = src.count();
  std::vector<double> lo(total), hi(total);
  std::vector<double> buf(2);
  auto cur = src.cursor(0);
  for (std::uint64_t i = 0; i < total; ++i) {
    cur.next(buf);
    PreparedSimplex::interval_bounds(buf[0], buf[1], tol.eps, lo[i], hi[i]);
  }
  std::sort(lo.begin(), lo.end());
  std::sort(hi.begin(), hi.end());
  std::vector<std::uint64_t> hits(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const double x = queries.row(q)[0];
    const auto a = std::upper_bound(lo.begin(), lo.end(), x) - lo.begin();
    const auto b = std::lower_bound(hi.begin(), hi.end(), x) - hi.begin();
    hits[q] = static_cast<std::uint64_t>(a - b);
  }
  return hits;
}

// All pairs of a 1-D sample, same arithmetic as CombinationSource + PreparedSimplex
// without the per-simplex cursor overhead.
inline std::vector<std::uint64_t> count_hits_pairs_1d(const CombinationSource& src, const Dataset& queries,
                                                      GeomTolerance tol, unsigned threads) {
  const auto xs = src.data().flat();
  const double sigma = src.sigma();
  const std::size_t n = xs.size(), nq = queries.size();
  const auto qs = queries.flat();
  const unsigned workers = resolve_threads(threads);
  const std::size_t chunks = workers == 1 ? 1 : static_cast<std::size_t>(workers) * 8;
  std::vector<std::vector<std::uint64_t>> partial(std::min<std::size_t>(chunks, std::max<std::size_t>(n, 1)),
                                                  std::vector<std::uint64_t>(nq, 0));
  parallel_chunks(n, partial.size(), threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    auto& hits = partial[c];
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double u = xs[i], v = xs[j];
        if (sigma != 1.0) {
          double m = 0.0;
          m += u;
          m += v;
          m /= 2.0;
          u = m + sigma * (xs[i] - m);
          v = m + sigma * (xs[j] - m);
        }
        double lo, hi;
        PreparedSimplex::interval_bounds(u, v, tol.eps, lo, hi);
        for (std::size_t q = 0; q < nq; ++q) hits[q] += qs[q] >= lo && qs[q] <= hi;
      }
  });
  std::vector<std::uint64_t> hits(nq, 0);
  for (const auto& p : partial)
    for (std::size_t q = 0; q < nq; ++q) hits[q] += p[q];
  return hits;
}

// All triangles of a 2-D sample by nested loops; same vertex arithmetic as
// CombinationSource.
inline std::vector<std::uint64_t> count_hits_triples_2d(const CombinationSource& src, const Dataset& queries,
                                                        GeomTolerance tol, unsigned threads) {
  const auto xs = src.data().flat();
  const double sigma = src.sigma();
  const std::size_t n = src.data().size(), nq = queries.size();
  const unsigned workers = resolve_threads(threads);
  const std::size_t chunks = workers == 1 ? 1 : static_cast<std::size_t>(workers) * 8;
  std::vector<std::vector<std::uint64_t>> partial(std::min<std::size_t>(chunks, std::max<std::size_t>(n, 1)),
                                                  std::vector<std::uint64_t>(nq, 0));
  parallel_chunks(n, partial.size(), threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    auto& hits = partial[c];
    PreparedSimplex ps(2, tol);
    double raw[6], out[6];
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          for (std::size_t t = 0; t < 2; ++t) {
            raw[t] = xs[2 * i + t];
            raw[2 + t] = xs[2 * j + t];
            raw[4 + t] = xs[2 * k + t];
          }
          enlarge_vertices(raw, 2, sigma, out);
          ps.reset(out);
          for (std::size_t q = 0; q < nq; ++q) hits[q] += ps.contains(queries.row(q));
        }
  });
  std::vector<std::uint64_t> hits(nq, 0);
  for (const auto& p : partial)
    for (std::size_t q = 0; q < nq; ++q) hits[q] += p[q];
  return hits;
}

inline constexpr std::uint64_t kSortedPathMaxIntervals = 20'000'000;
inline constexpr std::size_t kSortedPathMinQueries = 32;

// Counts, per query, the simplices of the stream that contain it. Counts are
// integers, so the per-chunk reduction is exact for any thread count.
template <class Source>
std::vector<std::uint64_t> count_hits(const Source& src, const Dataset& queries, GeomTolerance tol, unsigned threads) {
  const std::size_t d = queries.dim();
  const std::uint64_t total = src.count();
  const std::size_t nq = queries.size();
  if (d == 1 && nq >= kSortedPathMinQueries && total <= kSortedPathMaxIntervals)
    return count_hits_sorted_1d(src, queries, tol);
  if constexpr (std::is_same_v<Source, CombinationSource>) {
    if (d == 1) return count_hits_pairs_1d(src, queries, tol, threads);
    if (d == 2) return count_hits_triples_2d(src, queries, tol, threads);
  }

  const unsigned workers = resolve_threads(threads);
  const std::size_t chunks = workers == 1 ? 1 : static_cast<std::size_t>(workers) * 4;
  std::vector<std::vector<std::uint64_t>> partial(std::min<std::uint64_t>(chunks, std::max<std::uint64_t>(total, 1)),
                                                  std::vector<std::uint64_t>(nq, 0));
  parallel_chunks(total, partial.size(), threads, [&](std::size_t c, std::size_t b, std::size_t e) {
    auto& hits = partial[c];
    PreparedSimplex ps(d, tol);
    std::vector<double> verts((d + 1) * d);
    auto cur = src.cursor(b);
    for (std::size_t i = b; i < e; ++i) {
      cur.next(verts);
      ps.reset(verts);
      for (std::size_t q = 0; q < nq; ++q)
        if (ps.contains(queries.row(q))) ++hits[q];
    }
  });
  std::vector<std::uint64_t> hits(nq, 0);
  for (const auto& p : partial)
    for (std::size_t q = 0; q < nq; ++q) hits[q] += p[q];
  return hits;
}

template <class Source>
std::vector<DepthValue> to_depths(const Source& src, const Dataset& queries, const DepthConfig& cfg, bool exact) {
  const std::uint64_t total = src.count();
  const auto hits = count_hits(src, queries, cfg.tol, cfg.threads);
  std::vector<DepthValue> out(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q)
    out[q] = {static_cast<double>(hits[q]) / static_cast<double>(total), exact, total};
  return out;
}

inline void check_exact_cap(std::uint64_t count, const DepthConfig& cfg, const char* what) {
  if (count > cfg.exact_cap)
    throw ResourceError(std::string(what) + ": exact enumeration of " +
                        (count == kSaturated ? std::string("> 2^64") : std::to_string(count)) +
                        " simplices exceeds the cap of " + std::to_string(cfg.exact_cap) +
                        "; supply a Monte-Carlo budget");
}

// Sample simplicial depth of each query over the (optionally sigma-enlarged)
// simplices spanned by data rows.
inline std::vector<DepthValue> enlarged_simplex_depths(const Dataset& data, const Dataset& queries, double sigma,
                                                       const DepthConfig& cfg, const char* what) {
  const std::size_t k = data.dim() + 1;
  if (cfg.budget) {
    TupleListSource src(data, sigma, draw_index_tuples(data.size(), k, *cfg.budget, cfg.seed));
    return to_depths(src, queries, cfg, false);
  }
  CombinationSource src(data, sigma);
  check_exact_cap(src.count(), cfg, what);
  return to_depths(src, queries, cfg, true);
}

}  // namespace detail

// Simplex-enlarged sample depth: average over (d+1)-subsets of the indicator
// that x lies in the simplex dilated by sigma about its centroid.
inline std::vector<DepthValue> depth_simplex_enlarged(const Dataset& data, const Dataset& queries,
                                                      const DepthConfig& cfg) {
  detail::validate_config(cfg);
  detail::validate_queries(data, queries);
  const std::size_t p = data.dim() + 1;
  if (data.size() < p)
    throw InsufficientDataError("simplex-enlarged depth needs n >= d+1 = " + std::to_string(p) + " points, got " +
                                std::to_string(data.size()));
  return detail::enlarged_simplex_depths(data, queries, cfg.effective_sigma(), cfg, "simplex-enlarged depth");
}

// Block distribution-enlarged depth: simplicial depth over Y_1..Y_k, the
// sigma-combinations of consecutive disjoint blocks of d+1 points.
inline std::vector<DepthValue> depth_dist_enlarged_blocks(const Dataset& data, const Dataset& queries,
                                                          const DepthConfig& cfg) {
  detail::validate_config(cfg);
  detail::validate_queries(data, queries);
  const std::size_t p = data.dim() + 1;
  if (data.size() < p * p)
    throw InsufficientDataError("dist-enlarged-blocks depth needs n >= (d+1)^2 = " + std::to_string(p * p) +
                                " points, got " + std::to_string(data.size()));
  const Dataset ys = sample_sigma_blocks(data, SigmaParam(cfg.effective_sigma()));
  return detail::enlarged_simplex_depths(ys, queries, 1.0, cfg, "dist-enlarged-blocks depth");
}

// Full distribution-enlarged depth over every choice of (d+1)^2 distinct
// indices, leaders and labeled partner groups.
inline std::vector<DepthValue> depth_dist_enlarged_full(const Dataset& data, const Dataset& queries,
                                                        const DepthConfig& cfg) {
  detail::validate_config(cfg);
  detail::validate_queries(data, queries);
  const std::size_t d = data.dim(), p = d + 1;
  if (data.size() < p * p)
    throw InsufficientDataError("dist-enlarged-full depth needs n >= (d+1)^2 = " + std::to_string(p * p) +
                                " points, got " + std::to_string(data.size()));
  const double sigma = cfg.effective_sigma();
  if (cfg.budget) {
    detail::FullTupleSource src(data, sigma, detail::draw_index_tuples(data.size(), p * p, *cfg.budget, cfg.seed));
    return detail::to_depths(src, queries, cfg, false);
  }
  detail::check_exact_cap(full_enlarged_simplex_count(data.size(), d), cfg, "dist-enlarged-full depth");
  detail::FullExactSource src(data, sigma);
  return detail::to_depths(src, queries, cfg, true);
}

// Dispatches on cfg.method.
inline std::vector<DepthValue> compute_depths(const Dataset& data, const Dataset& queries, const DepthConfig& cfg) {
  switch (cfg.method) {
    case DepthMethod::simplicial:
    case DepthMethod::simplex_enlarged: return depth_simplex_enlarged(data, queries, cfg);
    case DepthMethod::dist_enlarged_blocks: return depth_dist_enlarged_blocks(data, queries, cfg);
    case DepthMethod::dist_enlarged_full: return depth_dist_enlarged_full(data, queries, cfg);
  }
  throw InputError("unknown depth method");
}

namespace detail {

inline Dataset single_query(std::span<const double> x) {
  check_finite_point(x, "depth query");
  return Dataset(x.size(), std::vector<double>(x.begin(), x.end()));
}

}  // namespace detail

inline DepthValue depth_simplex_enlarged(const Dataset& data, std::span<const double> x, const DepthConfig& cfg) {
  return depth_simplex_enlarged(data, detail::single_query(x), cfg).front();
}

inline DepthValue depth_dist_enlarged_blocks(const Dataset& data, std::span<const double> x, const DepthConfig& cfg) {
  return depth_dist_enlarged_blocks(data, detail::single_query(x), cfg).front();
}

inline DepthValue depth_dist_enlarged_full(const Dataset& data, std::span<const double> x, const DepthConfig& cfg) {
  return depth_dist_enlarged_full(data, detail::single_query(x), cfg).front();
}

inline DepthValue compute_depth(const Dataset& data, std::span<const double> x, const DepthConfig& cfg) {
  return compute_depths(data, detail::single_query(x), cfg).front();
}

// Minimum sample size for cfg.method in dimension d.
inline std::size_t min_sample_size(DepthMethod m, std::size_t d) {
  const std::size_t p = d + 1;
  return (m == DepthMethod::dist_enlarged_blocks || m == DepthMethod::dist_enlarged_full) ? p * p : p;
}

}  // namespace sdepth
