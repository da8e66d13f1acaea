#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sdepth/depth.hpp"
#include "sdepth/error.hpp"
#include "sdepth/geometry.hpp"
#include "sdepth/parallel.hpp"
#include "sdepth/regions.hpp"
#include "sdepth/rng.hpp"
#include "sdepth/types.hpp"

namespace sdepth {

struct LabeledSample {
  Point features;
  int label = 1;

  LabeledSample() = default;
  LabeledSample(Point f, int l) : features(std::move(f)), label(l) {
    detail::require(l == 1 || l == 2, "class labels must be 1 or 2");
  }
};

namespace detail {

inline int coin_class(std::uint64_t tie_seed, std::span<const double> key) { return seeded_coin(tie_seed, key) ? 1 : 2; }

inline int pick_class(double depth1, double depth2, std::uint64_t tie_seed, std::span<const double> key) {
  if (depth1 > depth2) return 1;
  if (depth2 > depth1) return 2;
  return coin_class(tie_seed, key);
}

}  // namespace detail

// Class with the larger depth; ties (including 0 vs 0) go to a coin keyed by
// tie_seed and the coordinates of x.
inline int max_depth_classify(const Dataset& train1, const Dataset& train2, std::span<const double> x,
                              const DepthConfig& cfg, std::uint64_t tie_seed) {
  const double a = compute_depth(train1, x, cfg).value;
  const double b = compute_depth(train2, x, cfg).value;
  return detail::pick_class(a, b, tie_seed, x);
}

// Batch form: each training set's simplices are enumerated once for all of `test`.
inline std::vector<int> max_depth_classify(const Dataset& train1, const Dataset& train2, const Dataset& test,
                                           const DepthConfig& cfg, std::uint64_t tie_seed) {
  const auto a = compute_depths(train1, test, cfg);
  const auto b = compute_depths(train2, test, cfg);
  std::vector<int> out(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) out[i] = detail::pick_class(a[i].value, b[i].value, tie_seed, test.row(i));
  return out;
}

inline constexpr int kMaxDDDegree = 10;
// Slope of the vertical rule d1 = 0: every point with d1 > 0 falls below it.
inline constexpr double kVerticalSlope = DBL_MAX;

// Polynomial through the origin in the DD-plot: class 2 iff d2 > sum_k a_k d1^k.
struct DDModel {
  int degree = 1;
  std::vector<double> coefficients{0.0};
  DepthConfig depth_cfg{};
  std::uint64_t tie_seed = 0;

  void validate() const {
    detail::require(degree >= 1 && degree <= kMaxDDDegree, "DD model degree must lie in [1, 10]");
    detail::require(coefficients.size() == static_cast<std::size_t>(degree), "DD model needs `degree` coefficients");
    for (double c : coefficients) detail::require(std::isfinite(c), "DD model coefficients must be finite");
  }
};

namespace detail {

inline double dd_poly(std::span<const double> a, double d1) {
  if (d1 == 0.0) return 0.0;
  double v = 0.0, pw = d1;
  for (double c : a) {
    v += c * pw;
    pw *= d1;
  }
  return v;
}

// Training 0-1 loss, a tie on the curve counting half.
inline double dd_loss(std::span<const double> a, std::span<const double> d1, std::span<const double> d2,
                      std::span<const int> labels) {
  double loss = 0.0;
  for (std::size_t i = 0; i < d1.size(); ++i) {
    const double v = dd_poly(a, d1[i]);
    if (d2[i] > v) loss += labels[i] != 2;
    else if (d2[i] < v) loss += labels[i] != 1;
    else loss += 0.5;
  }
  return loss;
}

inline double sq_norm(std::span<const double> a) {
  double s = 0.0;
  for (double c : a) s += c * c;
  return s;
}

// Global optimum among slope rules: the loss only changes at the ratios
// d2_i/d1_i, so the ratios, the midpoints between consecutive ratios, a slope
// below all of them, and the vertical rule cover every attainable value.
inline double fit_dd_slope(std::span<const double> d1, std::span<const double> d2, std::span<const int> labels) {
  std::vector<double> ratios;
  for (std::size_t i = 0; i < d1.size(); ++i)
    if (d1[i] > 0.0) ratios.push_back(d2[i] / d1[i]);
  std::sort(ratios.begin(), ratios.end());
  ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());
  std::vector<double> cand{0.0, -1.0, kVerticalSlope};
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    cand.push_back(ratios[i]);
    if (i + 1 < ratios.size()) cand.push_back(0.5 * (ratios[i] + ratios[i + 1]));
  }
  double best = 0.0, best_loss = INFINITY;
  for (double a : cand) {
    const double l = dd_loss(std::span<const double>(&a, 1), d1, d2, labels);
    if (l < best_loss || (l == best_loss && std::abs(a) < std::abs(best))) {
      best_loss = l;
      best = a;
    }
  }
  return best;
}

}  // namespace detail

struct DDFitOptions {
  int restarts = 8;
  std::size_t iterations_per_degree = 100;
  unsigned threads = 0;
};

// Minimises the training 0-1 loss of the DD rule. Degree 1 is exhaustive;
// higher degrees run polytope searches from the linear optimum and from
// `restarts` seeded random starts, keeping the best (smallest norm on ties).
inline DDModel fit_dd(std::span<const double> d1, std::span<const double> d2, std::span<const int> labels, int degree,
                      std::uint64_t seed, const DDFitOptions& opt = {}) {
  detail::require(d1.size() == d2.size() && d1.size() == labels.size(), "fit_dd: inputs differ in length");
  detail::require(d1.size() >= 2, "fit_dd: need at least two samples");
  detail::require(degree >= 1 && degree <= kMaxDDDegree, "fit_dd: degree must lie in [1, 10]");
  detail::require(opt.restarts >= 0, "fit_dd: restarts must be >= 0");
  bool has1 = false, has2 = false;
  for (std::size_t i = 0; i < d1.size(); ++i) {
    detail::require(labels[i] == 1 || labels[i] == 2, "fit_dd: labels must be 1 or 2");
    detail::require(std::isfinite(d1[i]) && std::isfinite(d2[i]), "fit_dd: depths must be finite");
    has1 |= labels[i] == 1;
    has2 |= labels[i] == 2;
  }
  detail::require(has1 && has2, "fit_dd: both classes must be present");

  DDModel model;
  model.degree = degree;
  model.tie_seed = seed;
  const double slope = detail::fit_dd_slope(d1, d2, labels);
  if (degree == 1) {
    model.coefficients = {slope};
    return model;
  }

  const std::size_t deg = static_cast<std::size_t>(degree);
  const double scale = std::clamp(std::abs(slope), 1.0, 1e3);
  std::vector<Point> starts;
  Point lin(deg, 0.0);
  lin[0] = std::clamp(slope, -1e3, 1e3);
  starts.push_back(lin);
  Rng rng = make_rng(substream_seed(seed, {0x64645f666974ULL}));
  std::uniform_real_distribution<double> u(-scale, scale);
  for (int r = 0; r < opt.restarts; ++r) {
    Point s(deg);
    for (auto& c : s) c = u(rng);
    starts.push_back(std::move(s));
  }

  std::vector<Point> found(starts.size());
  std::vector<double> losses(starts.size());
  parallel_chunks(starts.size(), starts.size(), opt.threads, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      auto f = [&](const Point& a) { return -detail::dd_loss(a, d1, d2, labels); };
      std::vector<double> step(deg, 0.25 * scale);
      found[i] = detail::polytope_maximize(f, starts[i], step, opt.iterations_per_degree * deg);
      losses[i] = detail::dd_loss(found[i], d1, d2, labels);
    }
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < found.size(); ++i)
    if (losses[i] < losses[best] || (losses[i] == losses[best] && detail::sq_norm(found[i]) < detail::sq_norm(found[best])))
      best = i;
  model.coefficients = found[best];
  return model;
}

// class 2 iff d2 > poly(d1); equality goes to the coin keyed by `key`.
inline int predict_dd(const DDModel& model, double d1, double d2, std::span<const double> key) {
  const double v = detail::dd_poly(model.coefficients, d1);
  if (d2 > v) return 2;
  if (d2 < v) return 1;
  return detail::coin_class(model.tie_seed, key);
}

// Coin keyed by the depth pair itself.
inline int predict_dd(const DDModel& model, double d1, double d2) {
  const double key[2] = {d1, d2};
  return predict_dd(model, d1, d2, key);
}

// True for test points outside both training hulls.
inline std::vector<bool> outsider_mask(const Dataset& train1, const Dataset& train2, const Dataset& test,
                                       GeomTolerance tol = {}) {
  detail::check_dims(train1.dim(), train2.dim(), "outsider_mask training sets");
  std::vector<bool> out(test.size());
  if (test.empty()) return out;
  detail::check_dims(train1.dim(), test.dim(), "outsider_mask test set");
  for (std::size_t i = 0; i < test.size(); ++i)
    out[i] = !convex_hull_contains(train1, test.row(i), tol) && !convex_hull_contains(train2, test.row(i), tol);
  return out;
}

inline double misclassification_rate(std::span<const int> predicted, std::span<const int> truth) {
  detail::require(predicted.size() == truth.size(), "misclassification_rate: length mismatch");
  detail::require(!predicted.empty(), "misclassification_rate: empty input");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) wrong += predicted[i] != truth[i];
  return static_cast<double>(wrong) / static_cast<double>(predicted.size());
}

}  // namespace sdepth
