#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sdepth/error.hpp"

namespace sdepth {

using Point = std::vector<double>;

// Absolute slack applied to barycentric coordinates (and to hull residuals).
struct GeomTolerance {
  double eps = 1e-9;

  GeomTolerance() = default;
  explicit GeomTolerance(double e) : eps(e) {
    detail::require(std::isfinite(e) && e >= 0.0, "tolerance must be finite and >= 0");
  }
};

// Enlargement factor; any finite positive value.
class SigmaParam {
 public:
  SigmaParam() = default;
  explicit SigmaParam(double v) : value_(v) {
    detail::require(std::isfinite(v) && v > 0.0, "sigma must be finite and > 0");
  }
  double value() const { return value_; }
  bool is_identity() const { return value_ == 1.0; }

 private:
  double value_ = 1.0;
};

// n points in R^d stored row-major.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::size_t dim, std::vector<double> flat) : dim_(dim), flat_(std::move(flat)) {
    detail::require(dim_ >= 1, "dataset dimension must be >= 1");
    detail::require(flat_.size() % dim_ == 0, "dataset storage is not a multiple of the dimension");
    for (double v : flat_) detail::require(std::isfinite(v), "dataset contains a non-finite coordinate");
  }

  static Dataset from_rows(const std::vector<Point>& rows) {
    detail::require(!rows.empty(), "dataset must contain at least one point");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (const auto& r : rows) {
      detail::require(r.size() == d, "dataset rows have unequal dimension");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return Dataset(d, std::move(flat));
  }

  // One-dimensional convenience constructor.
  static Dataset from_scalars(const std::vector<double>& xs) { return Dataset(1, xs); }

  std::size_t size() const { return dim_ == 0 ? 0 : flat_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return size() == 0; }

  std::span<const double> row(std::size_t i) const { return {flat_.data() + i * dim_, dim_}; }
  Point point(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }
  const std::vector<double>& flat() const { return flat_; }

  void push_back(std::span<const double> p) {
    if (dim_ == 0) dim_ = p.size();
    detail::require(p.size() == dim_, "point dimension does not match dataset");
    for (double v : p) detail::require(std::isfinite(v), "non-finite coordinate");
    flat_.insert(flat_.end(), p.begin(), p.end());
  }

  std::vector<Point> rows() const {
    std::vector<Point> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
    return out;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> flat_;
};

namespace detail {

inline void check_finite_point(std::span<const double> x, const char* what) {
  for (double v : x)
    if (!std::isfinite(v)) throw InputError(std::string(what) + " has a non-finite coordinate");
}

inline void check_dims(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw InputError(std::string(what) + ": dimension mismatch (expected " + std::to_string(expected) +
                     ", got " + std::to_string(got) + ")");
}

}  // namespace detail
}  // namespace sdepth
