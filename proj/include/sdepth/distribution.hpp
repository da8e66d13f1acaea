#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "sdepth/error.hpp"
#include "sdepth/types.hpp"

namespace sdepth {

inline constexpr double kCoincidenceTol = 1e-12;
inline constexpr double kWeightSumTol = 1e-12;

inline bool coords_coincide(std::span<const double> a, std::span<const double> b, double tol = kCoincidenceTol) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double s = std::max({1.0, std::abs(a[k]), std::abs(b[k])});
    if (std::abs(a[k] - b[k]) > tol * s) return false;
  }
  return true;
}

// Finite-support probability distribution on R^d.
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;

  DiscreteDistribution(std::vector<Point> support, std::vector<double> weights)
      : support_(std::move(support)), weights_(std::move(weights)) {
    validate();
  }

  static DiscreteDistribution point_mass(Point p) { return DiscreteDistribution({std::move(p)}, {1.0}); }

  static DiscreteDistribution uniform(std::vector<Point> support) {
    const double w = 1.0 / static_cast<double>(support.size());
    std::vector<double> ws(support.size(), w);
    return DiscreteDistribution(std::move(support), std::move(ws));
  }

  std::size_t size() const { return support_.size(); }
  std::size_t dim() const { return support_.empty() ? 0 : support_.front().size(); }
  const std::vector<Point>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }

  // Mass of the atom coinciding with p (0 when none).
  double mass_at(std::span<const double> p) const {
    for (std::size_t i = 0; i < support_.size(); ++i)
      if (coords_coincide(support_[i], p)) return weights_[i];
    return 0.0;
  }

  Point mean() const {
    Point m(dim(), 0.0);
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t k = 0; k < dim(); ++k) m[k] += weights_[i] * support_[i][k];
    return m;
  }

  // Row-major d x d covariance.
  std::vector<double> covariance() const {
    const std::size_t d = dim();
    const Point mu = mean();
    std::vector<double> c(d * d, 0.0);
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          c[a * d + b] += weights_[i] * (support_[i][a] - mu[a]) * (support_[i][b] - mu[b]);
    return c;
  }

 private:
  void validate() const {
    detail::require(!support_.empty(), "distribution needs a nonempty support");
    detail::require(support_.size() == weights_.size(), "support and weights differ in length");
    const std::size_t d = support_.front().size();
    detail::require(d >= 1, "support points need dimension >= 1");
    for (const auto& p : support_) {
      detail::check_dims(d, p.size(), "support point");
      detail::check_finite_point(p, "support point");
    }
    double total = 0.0;
    for (double w : weights_) {
      detail::require(std::isfinite(w) && w >= 0.0, "weights must be finite and >= 0");
      total += w;
    }
    detail::require(std::abs(total - 1.0) <= kWeightSumTol, "weights must sum to 1");
    // Lexicographic sort makes the pairwise-distinct check near linear.
    std::vector<std::size_t> order(support_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return support_[a] < support_[b]; });
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        const auto &a = support_[order[i]], &b = support_[order[j]];
        const double s = std::max({1.0, std::abs(a[0]), std::abs(b[0])});
        if (b[0] - a[0] > kCoincidenceTol * s) break;
        detail::require(!coords_coincide(a, b), "support points must be pairwise distinct");
      }
  }

  std::vector<Point> support_;
  std::vector<double> weights_;
};

namespace detail {

// Accumulates weighted atoms and merges coincident ones. Merging walks atoms in
// insertion order, so the result depends only on that order.
class AtomAccumulator {
 public:
  explicit AtomAccumulator(std::size_t dim) : dim_(dim) {}

  void add(std::span<const double> p, double w) {
    coords_.insert(coords_.end(), p.begin(), p.end());
    weights_.push_back(w);
  }

  DiscreteDistribution finish() const {
    const std::size_t n = weights_.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto row = [&](std::size_t i) { return std::span<const double>(coords_.data() + i * dim_, dim_); };
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return row(a)[0] < row(b)[0]; });

    std::vector<Point> support;
    std::vector<double> weights;
    std::vector<std::size_t> first_of;  // merged atom -> representative input index
    std::size_t window = 0;             // first merged atom whose x0 may still match
    for (std::size_t idx : order) {
      auto p = row(idx);
      while (window < support.size()) {
        const double s = std::max({1.0, std::abs(support[window][0]), std::abs(p[0])});
        if (p[0] - support[window][0] > kCoincidenceTol * s) ++window;
        else break;
      }
      bool merged = false;
      for (std::size_t j = window; j < support.size(); ++j)
        if (coords_coincide(support[j], p)) {
          weights[j] += weights_[idx];
          merged = true;
          break;
        }
      if (!merged) {
        support.emplace_back(p.begin(), p.end());
        weights.push_back(weights_[idx]);
      }
    }
    // Renormalise away accumulated rounding in the total.
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (auto& w : weights) w /= total;
    return DiscreteDistribution(std::move(support), std::move(weights));
  }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

}  // namespace detail

// Distribution of lambda X + b.
inline DiscreteDistribution affine_image(const DiscreteDistribution& P, double lambda, std::span<const double> b) {
  detail::check_dims(P.dim(), b.size(), "affine_image offset");
  detail::AtomAccumulator acc(P.dim());
  Point y(P.dim());
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (std::size_t k = 0; k < P.dim(); ++k) y[k] = lambda * P.support()[i][k] + b[k];
    acc.add(y, P.weights()[i]);
  }
  return acc.finish();
}

}  // namespace sdepth
