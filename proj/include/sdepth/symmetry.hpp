#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdepth/combinatorics.hpp"
#include "sdepth/distribution.hpp"
#include "sdepth/error.hpp"
#include "sdepth/types.hpp"

namespace sdepth {

enum class SymmetryKind { central, angular, halfspace };

inline std::string_view to_string(SymmetryKind k) {
  switch (k) {
    case SymmetryKind::central: return "central";
    case SymmetryKind::angular: return "angular";
    case SymmetryKind::halfspace: return "halfspace";
  }
  return "?";
}

inline SymmetryKind parse_symmetry_kind(std::string_view s) {
  for (auto k : {SymmetryKind::central, SymmetryKind::angular, SymmetryKind::halfspace})
    if (s == to_string(k)) return k;
  throw InputError("unknown symmetry kind '" + std::string(s) + "'");
}

// symmetric == false carries a witness: the offending atom for central
// symmetry, a violating unit direction u otherwise.
struct SymmetryVerdict {
  bool symmetric = false;
  std::optional<Point> center;
  std::optional<Point> witness;
  std::string detail;
};

inline constexpr double kMassTol = 1e-12;
inline constexpr double kDirectionPerturbation = 1e-7;

namespace detail {

inline void check_symmetry_scope(const DiscreteDistribution& P, std::span<const double> mu) {
  if (P.dim() > 2) throw UnsupportedError("symmetry checks support d <= 2");
  check_dims(P.dim(), mu.size(), "symmetry center");
  check_finite_point(mu, "symmetry center");
}

// Sign of u.(s - mu) with a relative zero band.
inline int side(std::span<const double> u, std::span<const double> s, std::span<const double> mu) {
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double v = s[k] - mu[k];
    dot += u[k] * v;
    uu += u[k] * u[k];
    vv += v * v;
  }
  if (std::abs(dot) <= 1e-12 * std::sqrt(uu * vv)) return 0;
  return dot > 0 ? 1 : -1;
}

struct HalfMasses {
  double positive = 0.0;  // u.(X - mu) > 0
  double negative = 0.0;  // u.(X - mu) < 0
  double zero = 0.0;      // on the boundary line, atom at mu excluded
  double atom = 0.0;      // mass at mu
};

inline HalfMasses half_masses(const DiscreteDistribution& P, std::span<const double> mu, std::span<const double> u) {
  HalfMasses h;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto& s = P.support()[i];
    const double w = P.weights()[i];
    if (coords_coincide(s, mu)) {
      h.atom += w;
      continue;
    }
    switch (side(u, s, mu)) {
      case 1: h.positive += w; break;
      case -1: h.negative += w; break;
      default: h.zero += w; break;
    }
  }
  return h;
}

// Directions (mod pi) at which the halfspace masses can change, the arc
// midpoints between them, and small perturbations of each critical direction.
inline std::vector<Point> critical_directions(const DiscreteDistribution& P, std::span<const double> mu) {
  if (P.dim() == 1) return {Point{1.0}};
  std::vector<Point> dirs;
  std::vector<double> angles;
  auto reduce = [](double a) {
    a = std::fmod(a, std::numbers::pi);
    return a < 0 ? a + std::numbers::pi : a;
  };
  for (const auto& s : P.support()) {
    const double vx = s[0] - mu[0], vy = s[1] - mu[1];
    if (vx == 0.0 && vy == 0.0) continue;
    const double n = std::hypot(vx, vy);
    dirs.push_back({vx / n, vy / n});
    dirs.push_back({-vy / n, vx / n});  // exactly orthogonal to s - mu
    const double a = std::atan2(vy, vx);
    angles.push_back(reduce(a));
    angles.push_back(reduce(a + std::numbers::pi / 2));
  }
  if (angles.empty()) return {Point{1.0, 0.0}};
  std::sort(angles.begin(), angles.end());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double a = angles[i];
    for (double t : {a - kDirectionPerturbation, a + kDirectionPerturbation}) dirs.push_back({std::cos(t), std::sin(t)});
    const double b = i + 1 < angles.size() ? angles[i + 1] : angles.front() + std::numbers::pi;
    const double mid = 0.5 * (a + b);
    dirs.push_back({std::cos(mid), std::sin(mid)});
  }
  return dirs;
}

}  // namespace detail

// X - mu and mu - X identically distributed: reflect every atom through mu.
inline SymmetryVerdict check_central_symmetry(const DiscreteDistribution& P, std::span<const double> mu) {
  detail::check_symmetry_scope(P, mu);
  Point r(P.dim());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto& s = P.support()[i];
    for (std::size_t k = 0; k < P.dim(); ++k) r[k] = 2.0 * mu[k] - s[k];
    const double w = P.mass_at(r);
    if (std::abs(w - P.weights()[i]) > kMassTol) {
      SymmetryVerdict v;
      v.witness = s;
      v.detail = "reflected atom carries mass " + std::to_string(w) + " instead of " + std::to_string(P.weights()[i]);
      return v;
    }
  }
  return {true, Point(mu.begin(), mu.end()), std::nullopt, ""};
}

// P(u.(X - mu) >= 0) == P(u.(mu - X) >= 0) for every direction u, with the
// atom at mu excluded from both sides.
inline SymmetryVerdict check_angular_symmetry(const DiscreteDistribution& P, std::span<const double> mu) {
  detail::check_symmetry_scope(P, mu);
  for (const auto& u : detail::critical_directions(P, mu)) {
    const auto h = detail::half_masses(P, mu, u);
    if (std::abs(h.positive - h.negative) > kMassTol) {
      SymmetryVerdict v;
      v.witness = u;
      v.detail = "open half-planes carry " + std::to_string(h.positive) + " vs " + std::to_string(h.negative);
      return v;
    }
  }
  return {true, Point(mu.begin(), mu.end()), std::nullopt, ""};
}

// Every closed halfspace with mu on its boundary has mass >= 1/2.
inline SymmetryVerdict check_halfspace_symmetry(const DiscreteDistribution& P, std::span<const double> mu) {
  detail::check_symmetry_scope(P, mu);
  for (const auto& u : detail::critical_directions(P, mu)) {
    const auto h = detail::half_masses(P, mu, u);
    const double closed_pos = h.positive + h.zero + h.atom, closed_neg = h.negative + h.zero + h.atom;
    if (closed_pos < 0.5 - kMassTol || closed_neg < 0.5 - kMassTol) {
      SymmetryVerdict v;
      v.witness = closed_pos < closed_neg ? u : Point{-u[0], u.size() > 1 ? -u[1] : 0.0};
      if (u.size() == 1) v.witness->resize(1);
      v.detail = "closed half-plane mass " + std::to_string(std::min(closed_pos, closed_neg)) + " < 1/2";
      return v;
    }
  }
  return {true, Point(mu.begin(), mu.end()), std::nullopt, ""};
}

inline SymmetryVerdict check_symmetry(SymmetryKind kind, const DiscreteDistribution& P, std::span<const double> mu) {
  switch (kind) {
    case SymmetryKind::central: return check_central_symmetry(P, mu);
    case SymmetryKind::angular: return check_angular_symmetry(P, mu);
    case SymmetryKind::halfspace: return check_halfspace_symmetry(P, mu);
  }
  throw InputError("unknown symmetry kind");
}

inline constexpr std::uint64_t kDefaultConvolutionCap = 10'000'000;

// Exact distribution of a X + b Y for independent X ~ P, Y ~ Q.
inline DiscreteDistribution discrete_convolution(const DiscreteDistribution& P, const DiscreteDistribution& Q, double a,
                                                 double b, std::uint64_t cap = kDefaultConvolutionCap) {
  detail::check_dims(P.dim(), Q.dim(), "discrete_convolution");
  detail::require(std::isfinite(a) && std::isfinite(b), "convolution coefficients must be finite");
  if (sat_mul(P.size(), Q.size()) > cap)
    throw ResourceError("discrete_convolution: support product exceeds the cap of " + std::to_string(cap));
  detail::AtomAccumulator acc(P.dim());
  Point z(P.dim());
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = 0; j < Q.size(); ++j) {
      for (std::size_t k = 0; k < P.dim(); ++k) z[k] = a * P.support()[i][k] + b * Q.support()[j][k];
      acc.add(z, P.weights()[i] * Q.weights()[j]);
    }
  return acc.finish();
}

namespace detail {

// Weighted median set of one coordinate: [lo, hi].
inline std::pair<double, double> coordinate_median(const DiscreteDistribution& P, std::size_t k) {
  std::vector<std::pair<double, double>> vals;
  for (std::size_t i = 0; i < P.size(); ++i) vals.emplace_back(P.support()[i][k], P.weights()[i]);
  std::sort(vals.begin(), vals.end());
  // Merge equal coordinates.
  std::vector<std::pair<double, double>> m;
  for (const auto& v : vals) {
    if (!m.empty() && m.back().first == v.first) m.back().second += v.second;
    else m.push_back(v);
  }
  double below = 0.0;
  std::optional<double> lo, hi;
  for (const auto& [x, w] : m) {
    const double above = 1.0 - below;  // P(X >= x)
    if (below + w >= 0.5 - kMassTol && above >= 0.5 - kMassTol) {
      if (!lo) lo = x;
      hi = x;
    }
    below += w;
  }
  if (!lo) {
    // The median falls strictly between two atoms.
    below = 0.0;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      below += m[i].second;
      if (std::abs(below - 0.5) <= kMassTol) return {m[i].first, m[i + 1].first};
    }
    return {m.front().first, m.back().first};
  }
  // When P(X <= lo) is exactly 1/2 every point up to the next atom is a median.
  double cum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    cum += m[i].second;
    if (m[i].first == *hi && std::abs(cum - 0.5) <= kMassTol && i + 1 < m.size()) hi = m[i + 1].first;
  }
  return {*lo, *hi};
}

}  // namespace detail

// Candidate centres for a symmetry notion: the mean for central symmetry. For
// angular and halfspace symmetry every centre lies in the coordinate-wise
// median box; the candidates are the box grid (corners, midpoints, support
// coordinates inside it) plus, in the plane, the support atoms and the
// intersections of lines through pairs of atoms that fall inside the box. The
// set of halfspace centres is a polygon with vertices among those
// intersections and atoms, so the list is exhaustive.
inline std::vector<Point> symmetry_center_candidates(SymmetryKind kind, const DiscreteDistribution& P) {
  if (kind == SymmetryKind::central) return {P.mean()};
  std::vector<std::vector<double>> per_axis(P.dim());
  std::vector<std::pair<double, double>> box(P.dim());
  for (std::size_t k = 0; k < P.dim(); ++k) {
    const auto [lo, hi] = detail::coordinate_median(P, k);
    box[k] = {lo, hi};
    auto& c = per_axis[k];
    c = {lo, hi, 0.5 * (lo + hi)};
    for (const auto& s : P.support())
      if (s[k] > lo && s[k] < hi) c.push_back(s[k]);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::vector<Point> out{{}};
  for (const auto& axis : per_axis) {
    std::vector<Point> next;
    for (const auto& prefix : out)
      for (double v : axis) {
        Point p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    out = std::move(next);
  }
  if (P.dim() != 2) return out;

  auto in_box = [&](double x, double y) {
    const double tx = kCoincidenceTol * std::max({1.0, std::abs(box[0].first), std::abs(box[0].second)});
    const double ty = kCoincidenceTol * std::max({1.0, std::abs(box[1].first), std::abs(box[1].second)});
    return x >= box[0].first - tx && x <= box[0].second + tx && y >= box[1].first - ty && y <= box[1].second + ty;
  };
  auto add = [&](Point p) {
    for (const auto& q : out)
      if (coords_coincide(p, q)) return;
    out.push_back(std::move(p));
  };
  const auto& S = P.support();
  for (const auto& s : S)
    if (in_box(s[0], s[1])) add(s);
  // Lines a x + b y = c through each pair of atoms.
  struct Line {
    double a, b, c;
  };
  std::vector<Line> lines;
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      const double a = S[j][1] - S[i][1], b = S[i][0] - S[j][0];
      lines.push_back({a, b, a * S[i][0] + b * S[i][1]});
    }
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto &L = lines[i], &M = lines[j];
      const double det = L.a * M.b - L.b * M.a;
      if (std::abs(det) <= 1e-12 * std::hypot(L.a, L.b) * std::hypot(M.a, M.b)) continue;
      const double x = (L.c * M.b - L.b * M.c) / det, y = (L.a * M.c - L.c * M.a) / det;
      if (in_box(x, y)) add({x, y});
    }
  return out;
}

// Symmetric about some candidate centre? Returns the first passing verdict, or
// a failing verdict naming the last candidate tried.
inline SymmetryVerdict find_symmetry_center(SymmetryKind kind, const DiscreteDistribution& P) {
  SymmetryVerdict last;
  for (const auto& c : symmetry_center_candidates(kind, P)) {
    last = check_symmetry(kind, P, c);
    if (last.symmetric) return last;
    last.detail = "no candidate centre passes; last tried (" + std::to_string(c[0]) +
                  (c.size() > 1 ? ", " + std::to_string(c[1]) : std::string()) + "): " + last.detail;
  }
  return last;
}

// Median of Gamma(2, 1): root of (1 + m) e^{-m} = 1/2, by bisection on [0, 10].
inline double gamma_median_root(double tol = 1e-9) {
  auto f = [](double m) { return (1.0 + m) * std::exp(-m) - 0.5; };
  double lo = 0.0, hi = 10.0;  // f(lo) > 0 > f(hi)
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace sdepth
