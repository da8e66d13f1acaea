#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sdepth/error.hpp"
#include "sdepth/types.hpp"

namespace sdepth {

// d+1 vertices in R^d, stored row-major. May be degenerate.
class Simplex {
 public:
  Simplex() = default;

  Simplex(std::size_t dim, std::vector<double> flat) : dim_(dim), flat_(std::move(flat)) {
    detail::require(dim_ >= 1, "simplex dimension must be >= 1");
    detail::require(flat_.size() == (dim_ + 1) * dim_, "simplex needs exactly d+1 vertices of dimension d");
    for (double v : flat_) detail::require(std::isfinite(v), "simplex vertex is not finite");
  }

  static Simplex from_vertices(const std::vector<Point>& vs) {
    detail::require(!vs.empty(), "simplex needs vertices");
    const std::size_t d = vs.front().size();
    detail::require(vs.size() == d + 1, "simplex needs exactly d+1 vertices");
    std::vector<double> flat;
    for (const auto& v : vs) {
      detail::check_dims(d, v.size(), "simplex vertex");
      flat.insert(flat.end(), v.begin(), v.end());
    }
    return Simplex(d, std::move(flat));
  }

  std::size_t dim() const { return dim_; }
  std::size_t vertex_count() const { return dim_ + 1; }
  std::span<const double> vertex(std::size_t i) const { return {flat_.data() + i * dim_, dim_}; }
  const std::vector<double>& flat() const { return flat_; }

  Point centroid() const {
    Point c(dim_, 0.0);
    for (std::size_t i = 0; i <= dim_; ++i)
      for (std::size_t k = 0; k < dim_; ++k) c[k] += flat_[i * dim_ + k];
    for (auto& v : c) v /= static_cast<double>(dim_ + 1);
    return c;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> flat_;
};

// Relative threshold below which a vertex matrix counts as singular:
// |det| <= kSingularRel * (product of edge-vector norms).
inline constexpr double kSingularRel = 1e-12;

namespace detail {

// Dense Phase-I simplex (Bland's rule) deciding whether x is within eps of
// conv(pts). pts is row-major with `dim` columns.
inline bool hull_lp(std::span<const double> pts, std::size_t dim, std::span<const double> x, double eps) {
  const std::size_t m = pts.size() / dim;
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < dim; ++k) scale = std::max(scale, std::abs(pts[i * dim + k] - x[k]));
  if (scale == 0.0) return true;

  // Rows 0..dim-1: sum_i lambda_i (p_i - x)/scale + a+_r - a-_r = 0; row dim: sum lambda + a = 1.
  const std::size_t rows = dim + 1;
  const std::size_t cols = m + 2 * dim + 1;
  std::vector<double> t(rows * (cols + 1), 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * (cols + 1) + c]; };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < dim; ++k) at(k, i) = (pts[i * dim + k] - x[k]) / scale;
    at(dim, i) = 1.0;
  }
  for (std::size_t k = 0; k < dim; ++k) {
    at(k, m + 2 * k) = 1.0;
    at(k, m + 2 * k + 1) = -1.0;
  }
  at(dim, m + 2 * dim) = 1.0;
  at(dim, cols) = 1.0;

  std::vector<double> cost(cols, 0.0);
  for (std::size_t j = m; j < cols; ++j) cost[j] = 1.0;
  std::vector<std::size_t> basis(rows);
  for (std::size_t k = 0; k < dim; ++k) basis[k] = m + 2 * k;
  basis[dim] = m + 2 * dim;

  const double piv_tol = 1e-12;
  const std::size_t max_iter = 50 * (cols + rows);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      double red = cost[j];
      for (std::size_t r = 0; r < rows; ++r) red -= cost[basis[r]] * at(r, j);
      if (red < -1e-13) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = rows;
    double best = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double a = at(r, enter);
      if (a <= piv_tol) continue;
      const double ratio = at(r, cols) / a;
      if (leave == rows || ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == rows) break;  // unbounded direction cannot occur in phase I
    const double pv = at(leave, enter);
    for (std::size_t c = 0; c <= cols; ++c) at(leave, c) /= pv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols; ++c) at(r, c) -= f * at(leave, c);
    }
    basis[leave] = enter;
  }
  double obj = 0.0;
  for (std::size_t r = 0; r < rows; ++r) obj += cost[basis[r]] * at(r, cols);
  return obj * scale <= eps * std::max(1.0, scale);
}

}  // namespace detail

// True iff x lies within tol.eps of the convex hull of pts.
inline bool convex_hull_contains(std::span<const double> pts, std::size_t dim, std::span<const double> x,
                                 GeomTolerance tol = {}) {
  if (pts.empty()) throw InputError("convex_hull_contains: empty point set");
  detail::check_dims(dim, x.size(), "convex_hull_contains query");
  detail::require(pts.size() % dim == 0, "convex_hull_contains: ragged point storage");
  const std::size_t m = pts.size() / dim;
  if (dim == 1) {
    double lo = pts[0], hi = pts[0];
    for (std::size_t i = 1; i < m; ++i) {
      lo = std::min(lo, pts[i]);
      hi = std::max(hi, pts[i]);
    }
    return x[0] >= lo - tol.eps && x[0] <= hi + tol.eps;
  }
  // Bounding-box rejection and exact vertex hits.
  double scale = 1.0;
  for (double v : pts) scale = std::max(scale, std::abs(v));
  const double slack = tol.eps * scale;
  for (std::size_t k = 0; k < dim; ++k) {
    double lo = pts[k], hi = pts[k];
    for (std::size_t i = 1; i < m; ++i) {
      lo = std::min(lo, pts[i * dim + k]);
      hi = std::max(hi, pts[i * dim + k]);
    }
    if (x[k] < lo - slack || x[k] > hi + slack) return false;
  }
  for (std::size_t i = 0; i < m; ++i)
    if (std::equal(x.begin(), x.end(), pts.begin() + static_cast<std::ptrdiff_t>(i * dim))) return true;
  return detail::hull_lp(pts, dim, x, tol.eps);
}

inline bool convex_hull_contains(const std::vector<Point>& pts, const Point& x, GeomTolerance tol = {}) {
  if (pts.empty()) throw InputError("convex_hull_contains: empty point set");
  const Dataset ds = Dataset::from_rows(pts);
  return convex_hull_contains(ds.flat(), ds.dim(), x, tol);
}

inline bool convex_hull_contains(const Dataset& pts, std::span<const double> x, GeomTolerance tol = {}) {
  if (pts.empty()) throw InputError("convex_hull_contains: empty point set");
  return convex_hull_contains(pts.flat(), pts.dim(), x, tol);
}

// A simplex factored once for repeated point queries. All containment in the
// library goes through this class so that single and batched queries agree
// bit for bit.
class PreparedSimplex {
 public:
  PreparedSimplex(std::size_t dim, GeomTolerance tol) : dim_(dim), eps_(tol.eps) {
    if (dim_ > 2) {
      origin_.resize(dim_);
      inverse_.resize(dim_ * dim_);
      work_.resize(dim_ * dim_);
      perm_.resize(dim_);
    }
  }

  // vertices: (d+1)*d row-major coordinates.
  void reset(std::span<const double> vertices) {
    degenerate_ = false;
    if (dim_ == 1) {
      a_ = vertices[0];
      b_ = vertices[1];
      degenerate_ = interval_bounds(a_, b_, eps_, lo_, hi_);
      return;
    }
    if (dim_ == 2) {
      const double* v0 = vertices.data();
      const double *v1 = v0 + 2, *v2 = v0 + 4;
      const double e0x = v0[0] - v2[0], e0y = v0[1] - v2[1];
      const double e1x = v1[0] - v2[0], e1y = v1[1] - v2[1];
      const double det = e0x * e1y - e1x * e0y;
      // Squared comparison unless the squares leave the normal range.
      const double q = (e0x * e0x + e0y * e0y) * (e1x * e1x + e1y * e1y);
      const bool singular = std::isnormal(q) && q < 1e300
                                ? !(det * det > kSingularRel * kSingularRel * q)
                                : !(std::abs(det) > kSingularRel * std::hypot(e0x, e0y) * std::hypot(e1x, e1y));
      if (singular) {
        mark_degenerate(vertices);
        return;
      }
      ox_ = v2[0];
      oy_ = v2[1];
      m00_ = e1y / det;
      m01_ = -e1x / det;
      m10_ = -e0y / det;
      m11_ = e0x / det;
      return;
    }
    prepare_general(vertices);
    if (degenerate_) mark_degenerate(vertices);
  }

  bool degenerate() const { return degenerate_; }

  // Closed interval accepted by the 1-D simplex {a, b}; returns true when a == b.
  static bool interval_bounds(double a, double b, double eps, double& lo, double& hi) {
    lo = std::min(a, b);
    hi = std::max(a, b);
    const double len = hi - lo;
    const double slack = len == 0.0 ? eps : eps * len;
    lo -= slack;
    hi += slack;
    return len == 0.0;
  }

  // 1-D only: the closed interval (with slack) this simplex accepts.
  double lower_bound() const { return lo_; }
  double upper_bound() const { return hi_; }

  bool contains(std::span<const double> x) const {
    if (dim_ == 1) return x[0] >= lo_ && x[0] <= hi_;
    if (degenerate_) return convex_hull_contains(vertices_, dim_, x, GeomTolerance(eps_));
    if (dim_ == 2) {
      const double dx = x[0] - ox_, dy = x[1] - oy_;
      const double a0 = m00_ * dx + m01_ * dy;
      const double a1 = m10_ * dx + m11_ * dy;
      return a0 >= -eps_ && a1 >= -eps_ && (1.0 - a0 - a1) >= -eps_;
    }
    double rest = 1.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double a = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) a += inverse_[i * dim_ + k] * (x[k] - origin_[k]);
      if (a < -eps_) return false;
      rest -= a;
    }
    return rest >= -eps_;
  }

  std::optional<std::vector<double>> barycentric(std::span<const double> x) const {
    if (degenerate_) return std::nullopt;
    std::vector<double> alpha(dim_ + 1);
    if (dim_ == 1) {
      alpha[0] = (x[0] - b_) / (a_ - b_);
      alpha[1] = 1.0 - alpha[0];
      return alpha;
    }
    if (dim_ == 2) {
      const double dx = x[0] - ox_, dy = x[1] - oy_;
      alpha[0] = m00_ * dx + m01_ * dy;
      alpha[1] = m10_ * dx + m11_ * dy;
      alpha[2] = 1.0 - alpha[0] - alpha[1];
      return alpha;
    }
    double rest = 1.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double a = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) a += inverse_[i * dim_ + k] * (x[k] - origin_[k]);
      alpha[i] = a;
      rest -= a;
    }
    alpha[dim_] = rest;
    return alpha;
  }

 private:
  void mark_degenerate(std::span<const double> v) {
    degenerate_ = true;
    vertices_.assign(v.begin(), v.end());
  }

  // LU with partial pivoting of T = [v_0 - v_d, ..., v_{d-1} - v_d], then T^{-1}.
  void prepare_general(std::span<const double> v) {
    const std::size_t d = dim_;
    const double* last = &v[d * d];
    for (std::size_t k = 0; k < d; ++k) origin_[k] = last[k];
    double norm = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double e = v[i * d + k] - last[k];
        work_[k * d + i] = e;  // column i
        s += e * e;
      }
      norm *= std::sqrt(s);
    }
    for (std::size_t i = 0; i < d; ++i) perm_[i] = i;
    double det = 1.0;
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < d; ++r)
        if (std::abs(work_[r * d + c]) > std::abs(work_[piv * d + c])) piv = r;
      if (work_[piv * d + c] == 0.0) {
        degenerate_ = true;
        return;
      }
      if (piv != c) {
        for (std::size_t k = 0; k < d; ++k) std::swap(work_[c * d + k], work_[piv * d + k]);
        std::swap(perm_[c], perm_[piv]);
        det = -det;
      }
      det *= work_[c * d + c];
      for (std::size_t r = c + 1; r < d; ++r) {
        const double f = work_[r * d + c] / work_[c * d + c];
        work_[r * d + c] = f;
        for (std::size_t k = c + 1; k < d; ++k) work_[r * d + k] -= f * work_[c * d + k];
      }
    }
    if (!(std::abs(det) > kSingularRel * norm)) {
      degenerate_ = true;
      return;
    }
    // Solve T * col = e_j for each unit vector.
    std::vector<double> col(d);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t r = 0; r < d; ++r) col[r] = perm_[r] == j ? 1.0 : 0.0;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t k = 0; k < r; ++k) col[r] -= work_[r * d + k] * col[k];
      for (std::size_t r = d; r-- > 0;) {
        for (std::size_t k = r + 1; k < d; ++k) col[r] -= work_[r * d + k] * col[k];
        col[r] /= work_[r * d + r];
      }
      for (std::size_t r = 0; r < d; ++r) inverse_[r * d + j] = col[r];
    }
  }

  std::size_t dim_;
  double eps_;
  bool degenerate_ = false;
  std::vector<double> vertices_;
  double a_ = 0, b_ = 0, lo_ = 0, hi_ = 0;
  double ox_ = 0, oy_ = 0, m00_ = 0, m01_ = 0, m10_ = 0, m11_ = 0;
  std::vector<double> origin_, inverse_, work_;
  std::vector<std::size_t> perm_;
};

// Barycentric coordinates of x; absent when the simplex is degenerate.
inline std::optional<std::vector<double>> barycentric_coordinates(const Simplex& s, std::span<const double> x) {
  detail::check_dims(s.dim(), x.size(), "barycentric_coordinates");
  PreparedSimplex ps(s.dim(), GeomTolerance{});
  ps.reset(s.flat());
  return ps.barycentric(x);
}

// Closed-simplex membership with barycentric slack; degenerate simplices fall
// back to hull membership of the vertex set.
inline bool simplex_contains(const Simplex& s, std::span<const double> x, GeomTolerance tol = {}) {
  detail::check_dims(s.dim(), x.size(), "simplex_contains");
  PreparedSimplex ps(s.dim(), tol);
  ps.reset(s.flat());
  return ps.contains(x);
}

namespace detail {

// y_i = c + sigma (x_i - c), written in place into out ((d+1)*d values).
inline void enlarge_vertices(std::span<const double> in, std::size_t dim, double sigma, std::span<double> out) {
  const std::size_t nv = dim + 1;
  if (sigma == 1.0) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  for (std::size_t k = 0; k < dim; ++k) {
    double c = 0.0;
    for (std::size_t i = 0; i < nv; ++i) c += in[i * dim + k];
    c /= static_cast<double>(nv);
    for (std::size_t i = 0; i < nv; ++i) out[i * dim + k] = c + sigma * (in[i * dim + k] - c);
  }
}

}  // namespace detail

// Dilates the simplex about its vertex centroid by sigma.
inline Simplex enlarge_simplex(const Simplex& s, double sigma) {
  if (!(std::isfinite(sigma) && sigma > 0.0)) throw InputError("enlarge_simplex: sigma must be > 0");
  std::vector<double> out(s.flat().size());
  detail::enlarge_vertices(s.flat(), s.dim(), sigma, out);
  return Simplex(s.dim(), std::move(out));
}

}  // namespace sdepth
