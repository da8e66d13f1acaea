#pragma once

// Brute-force and analytic references for the tests. Nothing here is shared
// with the library's estimators beyond the Dataset container.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdepth/types.hpp"

namespace oracle {

struct OracleReport {
  double value = 0.0;
  std::string method;  // enumeration | quadrature | closed-form
  std::uint64_t work = 0;
};

namespace detail {

// Closed segment/triangle membership with slack eps on barycentric coordinates,
// by Cramer's rule; collinear triangles fall back to the longest edge.
inline bool in_simplex(const std::vector<std::array<double, 2>>& v, std::size_t d, const double* x, double eps) {
  if (d == 1) {
    const double lo = std::min(v[0][0], v[1][0]), hi = std::max(v[0][0], v[1][0]);
    const double len = hi - lo, slack = len == 0.0 ? eps : eps * len;
    return x[0] >= lo - slack && x[0] <= hi + slack;
  }
  const double ax = v[0][0], ay = v[0][1], bx = v[1][0], by = v[1][1], cx = v[2][0], cy = v[2][1];
  const double det = (bx - ax) * (cy - ay) - (cx - ax) * (by - ay);
  const double scale = std::hypot(bx - ax, by - ay) * std::hypot(cx - ax, cy - ay);
  if (std::abs(det) > 1e-12 * scale) {
    const double l1 = ((x[0] - ax) * (cy - ay) - (cx - ax) * (x[1] - ay)) / det;
    const double l2 = ((bx - ax) * (x[1] - ay) - (x[0] - ax) * (by - ay)) / det;
    return l1 >= -eps && l2 >= -eps && 1.0 - l1 - l2 >= -eps;
  }
  // Degenerate: hull of collinear points is the longest edge.
  std::size_t bi = 0, bj = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      const double l = std::hypot(v[i][0] - v[j][0], v[i][1] - v[j][1]);
      if (l > best) best = l, bi = i, bj = j;
    }
  const double px = v[bi][0], py = v[bi][1], qx = v[bj][0] - px, qy = v[bj][1] - py;
  if (best == 0.0) return std::abs(x[0] - px) <= eps * std::max(1.0, std::abs(px)) &&
                          std::abs(x[1] - py) <= eps * std::max(1.0, std::abs(py));
  const double t = ((x[0] - px) * qx + (x[1] - py) * qy) / (best * best);
  const double off = std::abs((x[0] - px) * qy - (x[1] - py) * qx) / best;
  return t >= -eps && t <= 1.0 + eps && off <= eps * std::max(1.0, best);
}

}  // namespace detail

// Full distribution-enlarged sample depth by literal enumeration of every
// ordered tuple of (d+1)^2 distinct indices: the first d+1 are the leaders
// i_1..i_p, the remaining ones the partner lists j_{k,1..p-1}. Each tuple's
// vertices are put in canonical order (leaders ascending, partners summed in
// ascending index order) and the hit fraction over all n!/(n-p^2)! tuples is
// returned. Refuses n > 10 or d > 2.
inline OracleReport naive_full_enlarged_depth(const sdepth::Dataset& data, const std::vector<double>& x, double sigma,
                                             double eps = 1e-9) {
  const std::size_t n = data.size(), d = data.dim(), p = d + 1, m = p * p;
  if (d < 1 || d > 2 || n > 10) throw std::invalid_argument("naive_full_enlarged_depth: guard requires d <= 2, n <= 10");
  if (n < m) throw std::invalid_argument("naive_full_enlarged_depth: n < (d+1)^2");
  const double pd = static_cast<double>(p);
  const double a = sigma + (1.0 - sigma) / pd, b = (1.0 - sigma) / pd;

  std::vector<std::size_t> tuple(m);
  std::vector<bool> used(n, false);
  std::uint64_t hits = 0, total = 0;
  std::vector<std::array<double, 2>> verts(p);
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> groups(p);

  auto evaluate = [&]() {
    for (std::size_t g = 0; g < p; ++g) {
      groups[g].first = tuple[g];
      groups[g].second.assign(tuple.begin() + static_cast<std::ptrdiff_t>(p + g * d),
                              tuple.begin() + static_cast<std::ptrdiff_t>(p + (g + 1) * d));
      std::sort(groups[g].second.begin(), groups[g].second.end());
    }
    std::sort(groups.begin(), groups.end());
    for (std::size_t g = 0; g < p; ++g)
      for (std::size_t k = 0; k < d; ++k) {
        double s = 0.0;
        for (auto j : groups[g].second) s += data.row(j)[k];
        verts[g][k] = a * data.row(groups[g].first)[k] + b * s;
      }
    ++total;
    if (detail::in_simplex(verts, d, x.data(), eps)) ++hits;
  };

  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == m) {
      evaluate();
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      tuple[depth] = i;
      self(self, depth + 1);
      used[i] = false;
    }
  };
  rec(rec, 0);
  return {static_cast<double>(hits) / static_cast<double>(total), "enumeration", total};
}

// Simplex-enlarged sample depth by enumeration of ordered (d+1)-tuples with the
// dilation written as c + sigma (x_i - c).
inline OracleReport naive_simplex_enlarged_depth(const sdepth::Dataset& data, const std::vector<double>& x,
                                                 double sigma, double eps = 1e-9) {
  const std::size_t n = data.size(), d = data.dim(), p = d + 1;
  if (d < 1 || d > 2 || n > 40) throw std::invalid_argument("naive_simplex_enlarged_depth: guard requires d <= 2, n <= 40");
  std::uint64_t hits = 0, total = 0;
  std::vector<std::array<double, 2>> verts(p);
  std::vector<std::size_t> idx(p);
  auto rec = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == p) {
      for (std::size_t k = 0; k < d; ++k) {
        double c = 0.0;
        for (auto i : idx) c += data.row(i)[k];
        c /= static_cast<double>(p);
        for (std::size_t g = 0; g < p; ++g) verts[g][k] = c + sigma * (data.row(idx[g])[k] - c);
      }
      ++total;
      if (detail::in_simplex(verts, d, x.data(), eps)) ++hits;
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      idx[depth] = i;
      self(self, depth + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return {static_cast<double>(hits) / static_cast<double>(total), "enumeration", total};
}

// Population simplicial depth of x under U[0, 1]: 2 x (1 - x) on [0, 1].
inline double analytic_depth_1d_uniform(double x) {
  if (x < 0.0 || x > 1.0) return 0.0;
  return 2.0 * x * (1.0 - x);
}

// Population simplex-enlarged depth for the density uniform on
// (-c-eps, -c+eps) u (c-eps, c+eps), by midpoint quadrature over the support
// square with `cells` cells per interval and axis. A pair (x1, x2) counts when
// x lies in its sigma-dilated interval, written as the two half-plane
// conditions for x1 <= x2 and x1 >= x2.
inline OracleReport numeric_d_delta_two_intervals(double x, double c, double eps, double sigma,
                                                  std::size_t cells = 400) {
  if (!(c > 0.0) || !(eps > 0.0) || !(sigma > 0.0) || eps > std::min(sigma - 1.0, 2.0) * c / sigma)
    throw std::invalid_argument("numeric_d_delta_two_intervals: need 0 < eps <= min(sigma-1, 2) c / sigma");
  if (cells < 400) throw std::invalid_argument("numeric_d_delta_two_intervals: need >= 400 cells per axis");
  std::vector<double> nodes;
  for (double centre : {-c, c})
    for (std::size_t i = 0; i < cells; ++i)
      nodes.push_back(centre - eps + (static_cast<double>(i) + 0.5) * (2.0 * eps / static_cast<double>(cells)));
  const double lo_w = (1.0 + sigma) / 2.0, hi_w = (1.0 - sigma) / 2.0;
  std::uint64_t in = 0;
  for (double x1 : nodes)
    for (double x2 : nodes) {
      const bool plus = lo_w * x1 + hi_w * x2 <= x && x <= hi_w * x1 + lo_w * x2;
      const bool minus = hi_w * x1 + lo_w * x2 <= x && x <= lo_w * x1 + hi_w * x2;
      in += plus || minus;
    }
  const double total = static_cast<double>(nodes.size()) * static_cast<double>(nodes.size());
  return {static_cast<double>(in) / total, "quadrature", static_cast<std::uint64_t>(total)};
}

// Elliptical density of the simulation study, f(x, y), with s = x^2/4 + y^2.
inline double elliptical_density(double x, double y, double r0) {
  const double s = x * x / 4.0 + y * y;
  if (s < r0 * r0) return 3.0 / (4.0 * std::numbers::pi) * std::pow(r0, 4) * std::pow(1.0 + std::pow(r0, 6), -1.5);
  return 3.0 * s * s / (4.0 * std::numbers::pi * std::pow(1.0 + s * s * s, 1.5));
}

// Mass of f inside {x^2/4 + y^2 < r0^2}, midpoint quadrature over the
// bounding box of the ellipse.
inline OracleReport elliptical_inner_mass(double r0, std::size_t cells = 2000) {
  const double hx = 2.0 * r0, hy = r0;
  const double dx = 2.0 * hx / static_cast<double>(cells), dy = 2.0 * hy / static_cast<double>(cells);
  double sum = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double x = -hx + (static_cast<double>(i) + 0.5) * dx;
    for (std::size_t j = 0; j < cells; ++j) {
      const double y = -hy + (static_cast<double>(j) + 0.5) * dy;
      if (x * x / 4.0 + y * y < r0 * r0) sum += elliptical_density(x, y, r0);
    }
  }
  return {sum * dx * dy, "quadrature", static_cast<std::uint64_t>(cells) * cells};
}

// Total mass of f in polar coordinates of (x/2, y), radial midpoint rule on
// [0, rmax]; the neglected tail is below (1 + rmax^6)^{-1/2}.
inline OracleReport elliptical_total_mass(double r0, std::size_t steps = 2'000'000, double rmax = 1000.0) {
  const double h = rmax / static_cast<double>(steps);
  double sum = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double rho = (static_cast<double>(i) + 0.5) * h;
    sum += elliptical_density(2.0 * rho, 0.0, r0) * 2.0 * 2.0 * std::numbers::pi * rho;
  }
  return {sum * h, "quadrature", steps};
}

}  // namespace oracle
