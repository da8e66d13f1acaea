#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdepth/combinatorics.hpp"
#include "sdepth/distribution.hpp"
#include "sdepth/error.hpp"
#include "sdepth/types.hpp"

namespace sdepth {

namespace detail {

// out = sigma * block[0] + (1 - sigma)/(d+1) * sum_j block[j]; block is (d+1)*d row-major.
inline void sigma_combine_into(std::span<const double> block, std::size_t dim, double sigma, std::span<double> out) {
  if (sigma == 1.0) {
    std::copy(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(dim), out.begin());
    return;
  }
  const double w = (1.0 - sigma) / static_cast<double>(dim + 1);
  for (std::size_t k = 0; k < dim; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j <= dim; ++j) s += block[j * dim + k];
    out[k] = sigma * block[k] + w * s;
  }
}

}  // namespace detail

// sigma X_1 + (1 - sigma)/(d+1) sum_j X_j over a block of d+1 points.
inline Point sigma_combine(const std::vector<Point>& block, SigmaParam sigma) {
  detail::require(!block.empty(), "sigma_combine: empty block");
  const std::size_t d = block.front().size();
  if (block.size() != d + 1) throw InputError("sigma_combine: block must hold exactly d+1 points");
  std::vector<double> flat;
  for (const auto& p : block) {
    detail::check_dims(d, p.size(), "sigma_combine block point");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  Point out(d);
  detail::sigma_combine_into(flat, d, sigma.value(), out);
  return out;
}

// Y_i from consecutive disjoint blocks of d+1 data points, in data order.
inline Dataset sample_sigma_blocks(const Dataset& data, SigmaParam sigma) {
  const std::size_t d = data.dim(), p = d + 1;
  if (data.size() < p)
    throw InsufficientDataError("sample_sigma_blocks: need at least d+1 = " + std::to_string(p) + " points");
  const std::size_t k = data.size() / p;
  std::vector<double> out(k * d);
  for (std::size_t i = 0; i < k; ++i) {
    std::span<const double> block(data.flat().data() + i * p * d, p * d);
    detail::sigma_combine_into(block, d, sigma.value(), std::span<double>(out.data() + i * d, d));
  }
  return Dataset(d, std::move(out));
}

// Covariance multiplier of the sigma-transformed distribution.
inline double sigma_covariance_factor(std::size_t d, SigmaParam sigma) {
  detail::require(d >= 1, "sigma_covariance_factor: d must be >= 1");
  const double s2 = sigma.value() * sigma.value();
  return s2 + (1.0 - s2) / static_cast<double>(d + 1);
}

inline constexpr std::uint64_t kDefaultTupleCap = 10'000'000;

// Exact pushforward of P through sigma_combine over all (d+1)-tuples of
// independent draws.
inline DiscreteDistribution discrete_sigma_transform(const DiscreteDistribution& P, SigmaParam sigma,
                                                     std::uint64_t tuple_cap = kDefaultTupleCap) {
  const std::size_t d = P.dim(), p = d + 1, m = P.size();
  std::uint64_t tuples = 1;
  for (std::size_t i = 0; i < p; ++i) tuples = sat_mul(tuples, m);
  if (tuples > tuple_cap)
    throw ResourceError("discrete_sigma_transform: " + std::to_string(m) + "^" + std::to_string(p) +
                        " tuples exceed the cap of " + std::to_string(tuple_cap));
  detail::AtomAccumulator acc(d);
  std::vector<std::size_t> idx(p, 0);
  std::vector<double> block(p * d);
  Point y(d);
  for (std::uint64_t t = 0; t < tuples; ++t) {
    double w = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      const auto& s = P.support()[idx[j]];
      std::copy(s.begin(), s.end(), block.begin() + static_cast<std::ptrdiff_t>(j * d));
      w *= P.weights()[idx[j]];
    }
    detail::sigma_combine_into(block, d, sigma.value(), y);
    acc.add(y, w);
    for (std::size_t j = p; j-- > 0;) {
      if (++idx[j] < m) break;
      idx[j] = 0;
    }
  }
  return acc.finish();
}

}  // namespace sdepth
