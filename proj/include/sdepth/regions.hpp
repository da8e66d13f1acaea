#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "sdepth/depth.hpp"
#include "sdepth/error.hpp"
#include "sdepth/types.hpp"

namespace sdepth {

// Regular grid: one axis per dimension, `count` nodes from lo to hi inclusive.
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;

  double node(std::size_t i) const {
    if (count <= 1) return lo;
    return lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(count - 1);
  }
  double spacing() const { return count <= 1 ? 0.0 : (hi - lo) / static_cast<double>(count - 1); }
};

struct GridSpec {
  std::vector<GridAxis> axes;

  std::size_t dim() const { return axes.size(); }
  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.count;
    return n;
  }

  // Nodes in row-major order, the last axis varying fastest.
  Dataset nodes() const {
    const std::size_t d = dim(), n = size();
    std::vector<double> flat(n * d);
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t g = 0; g < n; ++g) {
      for (std::size_t k = 0; k < d; ++k) flat[g * d + k] = axes[k].node(idx[k]);
      for (std::size_t k = d; k-- > 0;) {
        if (++idx[k] < axes[k].count) break;
        idx[k] = 0;
      }
    }
    return Dataset(d, std::move(flat));
  }

  // Axis-aligned box around the data with `count` nodes per axis.
  static GridSpec bounding(const Dataset& data, std::size_t count, double margin = 0.0) {
    GridSpec g;
    for (std::size_t k = 0; k < data.dim(); ++k) {
      double lo = data.row(0)[k], hi = lo;
      for (std::size_t i = 1; i < data.size(); ++i) {
        lo = std::min(lo, data.row(i)[k]);
        hi = std::max(hi, data.row(i)[k]);
      }
      const double pad = margin * (hi - lo);
      g.axes.push_back({lo - pad, hi + pad, count});
    }
    return g;
  }
};

struct MaximizerOptions {
  std::size_t grid_nodes = 21;
  std::size_t iterations = 200;
  std::size_t max_grid_dim = 3;
};

namespace detail {

// Nelder-Mead on f (to be maximised), starting from the simplex x0 + step_k e_k.
template <class F>
Point polytope_maximize(F&& f, const Point& x0, const std::vector<double>& step, std::size_t iterations) {
  const std::size_t d = x0.size();
  std::vector<Point> v(d + 1, x0);
  for (std::size_t k = 0; k < d; ++k) v[k + 1][k] += step[k];
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fv[i] = f(v[i]);

  Point best = v[0];
  double fbest = fv[0];
  auto track = [&](const Point& x, double fx) {
    if (fx > fbest) {
      fbest = fx;
      best = x;
    }
  };
  for (std::size_t i = 1; i <= d; ++i) track(v[i], fv[i]);

  auto combine = [&](const Point& a, const Point& b, double t) {
    Point r(d);
    for (std::size_t k = 0; k < d; ++k) r[k] = a[k] + t * (b[k] - a[k]);
    return r;
  };
  std::vector<std::size_t> order(d + 1);
  for (std::size_t it = 0; it < iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    // Descending by value; stable so ties keep the older vertex first.
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] > fv[b]; });
    const std::size_t worst = order[d], second = order[d > 0 ? d - 1 : 0], top = order[0];
    Point c(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < d; ++k) c[k] += v[i][k] / static_cast<double>(d);

    const Point xr = combine(c, v[worst], -1.0);
    const double fr = f(xr);
    track(xr, fr);
    if (fr > fv[top]) {
      const Point xe = combine(c, v[worst], -2.0);
      const double fe = f(xe);
      track(xe, fe);
      if (fe > fr) {
        v[worst] = xe;
        fv[worst] = fe;
      } else {
        v[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr > fv[second]) {
      v[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr > fv[worst];
    const Point xc = outside ? combine(c, xr, 0.5) : combine(c, v[worst], 0.5);
    const double fc = f(xc);
    track(xc, fc);
    if ((outside && fc >= fr) || (!outside && fc > fv[worst])) {
      v[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == top) continue;
      v[i] = combine(v[top], v[i], 0.5);
      fv[i] = f(v[i]);
      track(v[i], fv[i]);
    }
  }
  return best;
}

}  // namespace detail

// Approximate argmax of the configured sample depth: grid search over the data
// bounding box (data points themselves when d exceeds max_grid_dim), then
// polytope refinement from the best node.
inline Point depth_maximizer(const Dataset& data, const DepthConfig& cfg, const MaximizerOptions& opt = {}) {
  if (data.empty()) throw InputError("depth_maximizer: empty dataset");
  const std::size_t d = data.dim();
  Dataset candidates;
  std::vector<double> step(d, 0.0);
  if (d <= opt.max_grid_dim) {
    const GridSpec grid = GridSpec::bounding(data, opt.grid_nodes);
    candidates = grid.nodes();
    for (std::size_t k = 0; k < d; ++k) step[k] = grid.axes[k].spacing();
  } else {
    candidates = data;
    const GridSpec box = GridSpec::bounding(data, 2);
    for (std::size_t k = 0; k < d; ++k) step[k] = 0.1 * (box.axes[k].hi - box.axes[k].lo);
  }
  const auto depths = compute_depths(data, candidates, cfg);
  std::size_t best = 0;
  for (std::size_t i = 1; i < depths.size(); ++i)
    if (depths[i].value > depths[best].value) best = i;
  const Point start = candidates.point(best);
  if (std::all_of(step.begin(), step.end(), [](double s) { return s == 0.0; }) || opt.iterations == 0) return start;

  auto f = [&](const Point& x) { return compute_depth(data, x, cfg).value; };
  return detail::polytope_maximize(f, start, step, opt.iterations);
}

// mask[g] = depth(node g) >= alpha, nodes in GridSpec::nodes() order.
inline std::vector<bool> trimmed_region_grid(const Dataset& data, const DepthConfig& cfg, double alpha,
                                             const GridSpec& grid) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("trimmed_region_grid: alpha must lie in [0, 1]");
  if (grid.dim() != data.dim()) throw InputError("trimmed_region_grid: grid dimension differs from data");
  if (grid.dim() > 2) throw UnsupportedError("trimmed_region_grid: grid export supports d <= 2");
  const auto depths = compute_depths(data, grid.nodes(), cfg);
  std::vector<bool> mask(depths.size());
  for (std::size_t i = 0; i < depths.size(); ++i) mask[i] = depths[i].value >= alpha;
  return mask;
}

}  // namespace sdepth
