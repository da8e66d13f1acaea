#include <gtest/gtest.h>

#include <random>

#include "sdepth/io.hpp"
#include "sdepth/sigma_transform.hpp"
#include "sdepth/symmetry.hpp"

using namespace sdepth;

namespace {

DiscreteDistribution load(const std::string& name) {
  return distribution_from_json(read_json_file(std::string(SDEPTH_FIXTURE_DIR) + "/" + name));
}

const Point origin{0, 0};

void expect_atoms(const DiscreteDistribution& P, const std::vector<std::pair<Point, double>>& atoms) {
  EXPECT_EQ(P.size(), atoms.size());
  for (const auto& [p, w] : atoms) EXPECT_NEAR(P.mass_at(p), w, 1e-15) << p[0] << "," << p[1];
}

// Distribution of (1 + 2 lambda) X1 - lambda X2 - lambda X3 for i.i.d. X ~ P.
DiscreteDistribution three_term(const DiscreteDistribution& P, double lambda) {
  return discrete_convolution(discrete_convolution(P, P, 1 + 2 * lambda, -lambda), P, 1.0, -lambda);
}

bool symmetric_anywhere(SymmetryKind k, const DiscreteDistribution& P) { return find_symmetry_center(k, P).symmetric; }

}  // namespace

TEST(CentralSymmetry, Examples) {
  EXPECT_TRUE(check_central_symmetry(DiscreteDistribution::uniform({{-1, 0}, {1, 0}}), origin).symmetric);
  const auto v = check_central_symmetry(load("four_point_angular.json"), origin);
  EXPECT_FALSE(v.symmetric);
  EXPECT_TRUE(v.witness.has_value());
  EXPECT_TRUE(check_central_symmetry(DiscreteDistribution::point_mass({3, 4}), Point{3, 4}).symmetric);
}

TEST(AngularSymmetry, Examples) {
  EXPECT_TRUE(check_angular_symmetry(load("four_point_angular.json"), origin).symmetric);
  EXPECT_TRUE(check_angular_symmetry(load("two_point_line.json"), Point{0}).symmetric);
  // On the line any median is an angular centre.
  EXPECT_TRUE(check_angular_symmetry(load("two_point_line.json"), Point{0.5}).symmetric);
  EXPECT_FALSE(check_angular_symmetry(load("two_point_line.json"), Point{2}).symmetric);
}

TEST(AngularSymmetry, AtomAtCentreExcluded) {
  const DiscreteDistribution P({{0, 0}, {1, 1}, {-2, -2}}, {0.6, 0.2, 0.2});
  EXPECT_TRUE(check_angular_symmetry(P, origin).symmetric);
  EXPECT_FALSE(check_central_symmetry(P, origin).symmetric);
}

TEST(HalfspaceSymmetry, Examples) {
  EXPECT_TRUE(check_halfspace_symmetry(load("axis_atoms_horizontal.json"), origin).symmetric);
  EXPECT_TRUE(check_halfspace_symmetry(DiscreteDistribution::uniform({{1, 2}, {3, 6}}), Point{2, 4}).symmetric);
  const auto X = discrete_convolution(load("axis_atoms_horizontal.json"), load("axis_atoms_vertical.json"), 1, 1);
  const auto v = check_halfspace_symmetry(X, origin);
  EXPECT_FALSE(v.symmetric);
  ASSERT_TRUE(v.witness.has_value());
}

TEST(HalfspaceSymmetry, OneDimMedian) {
  const DiscreteDistribution P({{0}, {1}, {5}}, {0.3, 0.3, 0.4});
  EXPECT_TRUE(check_halfspace_symmetry(P, Point{1}).symmetric);
  EXPECT_FALSE(check_halfspace_symmetry(P, Point{2}).symmetric);
}

TEST(Symmetry, ScopeLimitedToPlane) {
  const auto P = DiscreteDistribution::uniform({{0, 0, 1}, {0, 0, -1}});
  const Point mu{0, 0, 0};
  EXPECT_THROW(check_central_symmetry(P, mu), UnsupportedError);
  EXPECT_THROW(check_angular_symmetry(P, mu), UnsupportedError);
  EXPECT_THROW(check_halfspace_symmetry(P, mu), UnsupportedError);
  EXPECT_THROW(check_central_symmetry(load("four_point_angular.json"), Point{0}), InputError);
}

TEST(Symmetry, KindNames) {
  for (auto k : {SymmetryKind::central, SymmetryKind::angular, SymmetryKind::halfspace})
    EXPECT_EQ(parse_symmetry_kind(to_string(k)), k);
  EXPECT_THROW(parse_symmetry_kind("elliptical"), InputError);
}

TEST(Convolution, Examples) {
  const auto coin = DiscreteDistribution::uniform({{0}, {1}});
  expect_atoms(discrete_convolution(coin, coin, 1, 1), {{{0}, 0.25}, {{1}, 0.5}, {{2}, 0.25}});
  expect_atoms(discrete_convolution(coin, DiscreteDistribution::uniform({{5}, {7}}), 1, 0), {{{0}, 0.5}, {{1}, 0.5}});
  EXPECT_THROW(discrete_convolution(coin, coin, 1, 1, 3), ResourceError);
}

TEST(Convolution, FourPointSelfSumAtoms) {
  const auto P = load("four_point_angular.json");
  expect_atoms(discrete_convolution(P, P, 1, 1), {{{-2, -2}, 1.0 / 16},
                                                  {{-2, 0}, 1.0 / 16},
                                                  {{6, 0}, 1.0 / 16},
                                                  {{6, 6}, 1.0 / 16},
                                                  {{-2, -1}, 1.0 / 8},
                                                  {{2, -1}, 1.0 / 8},
                                                  {{2, 0}, 1.0 / 8},
                                                  {{2, 2}, 1.0 / 8},
                                                  {{2, 3}, 1.0 / 8},
                                                  {{6, 3}, 1.0 / 8}});
}

TEST(Convolution, FivePointSelfSumAtoms) {
  const auto P = load("five_point_center_atom.json");
  std::vector<std::pair<Point, double>> atoms;
  for (const Point& p : {Point{0, 0}, {-2, 0}, {-4, -4}, {6, 0}, {8, 8}}) atoms.push_back({p, 1.0 / 25});
  for (const Point& p : {Point{-1, 0}, {-2, -2}, {3, 0}, {4, 4}, {-3, -2}, {2, 0}, {3, 4}, {1, -2}, {2, 2}, {7, 4}})
    atoms.push_back({p, 2.0 / 25});
  const auto S = discrete_convolution(P, P, 1, 1);
  expect_atoms(S, atoms);
}

TEST(Convolution, AxisAtomsSum) {
  // Exact enumeration of the nine products.
  const auto S = discrete_convolution(load("axis_atoms_horizontal.json"), load("axis_atoms_vertical.json"), 1, 1);
  std::vector<std::pair<Point, double>> atoms{{{0, 0}, 1.0 / 25}};
  for (const Point& p : {Point{-1, 3}, {-1, -7}, {5, 3}, {5, -7}}) atoms.push_back({p, 4.0 / 25});
  for (const Point& p : {Point{-1, 0}, {5, 0}, {0, 3}, {0, -7}}) atoms.push_back({p, 2.0 / 25});
  expect_atoms(S, atoms);
}

TEST(Convolution, ThreeTermAtoms) {
  const auto T = three_term(load("four_point_angular.json"), std::sqrt(2.0));
  ASSERT_EQ(T.size(), 40u);
  int small = 0, large = 0;
  for (double w : T.weights()) {
    if (std::abs(w - 1.0 / 64) < 1e-15) ++small;
    if (std::abs(w - 1.0 / 32) < 1e-15) ++large;
  }
  EXPECT_EQ(small, 16);
  EXPECT_EQ(large, 24);
}

// Base distributions are angular and halfspace symmetric about the origin; the
// combinations are not symmetric about any centre.
TEST(ConvolutionRegression, FourPointSelfSum) {
  const auto P = load("four_point_angular.json");
  EXPECT_TRUE(check_angular_symmetry(P, origin).symmetric);
  EXPECT_TRUE(check_halfspace_symmetry(P, origin).symmetric);
  EXPECT_FALSE(check_central_symmetry(P, origin).symmetric);
  const auto S = discrete_convolution(P, P, 1, 1);
  const auto cands = symmetry_center_candidates(SymmetryKind::halfspace, S);
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_EQ(cands[0], (Point{2, 0}));
  EXPECT_FALSE(symmetric_anywhere(SymmetryKind::angular, S));
  EXPECT_FALSE(symmetric_anywhere(SymmetryKind::halfspace, S));
  // The line y = x - 2 through (2, 0) separates less than half the mass.
  const auto h = detail::half_masses(S, Point{2, 0}, Point{-1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
  EXPECT_LT(std::min(h.positive, h.negative) + h.zero + h.atom, 0.5);
}

TEST(ConvolutionRegression, FivePointSelfSum) {
  const auto P = load("five_point_center_atom.json");
  EXPECT_TRUE(check_angular_symmetry(P, origin).symmetric);
  EXPECT_TRUE(check_halfspace_symmetry(P, origin).symmetric);
  const auto S = discrete_convolution(P, P, 1, 1);
  EXPECT_FALSE(symmetric_anywhere(SymmetryKind::angular, S));
  EXPECT_FALSE(symmetric_anywhere(SymmetryKind::halfspace, S));
}

TEST(ConvolutionRegression, ThreeTermCombination) {
  const auto P = load("four_point_angular.json");
  for (double lambda : {std::sqrt(2.0), 0.5, 1.0, -0.7}) {
    const auto T = three_term(P, lambda);
    EXPECT_FALSE(symmetric_anywhere(SymmetryKind::angular, T)) << lambda;
    EXPECT_FALSE(symmetric_anywhere(SymmetryKind::halfspace, T)) << lambda;
  }
}

TEST(ConvolutionRegression, NonIdenticalAxisAtoms) {
  const auto X1 = load("axis_atoms_horizontal.json"), X2 = load("axis_atoms_vertical.json");
  for (const auto& X : {X1, X2}) {
    EXPECT_TRUE(check_angular_symmetry(X, origin).symmetric);
    EXPECT_TRUE(check_halfspace_symmetry(X, origin).symmetric);
  }
  const auto Y = discrete_convolution(X1, X2, 1, 1);
  const auto cands = symmetry_center_candidates(SymmetryKind::halfspace, Y);
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_EQ(cands[0], origin);
  EXPECT_FALSE(symmetric_anywhere(SymmetryKind::angular, Y));
  EXPECT_FALSE(symmetric_anywhere(SymmetryKind::halfspace, Y));
}

TEST(GammaMedian, Root) {
  const double m = gamma_median_root();
  EXPECT_NEAR(m, 1.67835, 1e-4);
  EXPECT_GT(std::abs(m - 2 * std::log(2.0)), 0.25);
  EXPECT_NEAR((1 + m) * std::exp(-m), 0.5, 1e-8);
}

namespace {

std::vector<std::pair<DiscreteDistribution, Point>> corpus() {
  std::vector<std::pair<DiscreteDistribution, Point>> c{
      {load("four_point_angular.json"), origin},
      {load("five_point_center_atom.json"), origin},
      {load("axis_atoms_horizontal.json"), origin},
      {load("axis_atoms_vertical.json"), origin},
      {load("two_point_line.json"), Point{0}},
      {DiscreteDistribution::uniform({{-1, 0}, {1, 0}, {0, -2}, {0, 2}}), origin},
      {DiscreteDistribution({{1, 1}, {-1, -1}, {2, -1}, {-2, 1}, {0, 0}}, {0.1, 0.1, 0.3, 0.3, 0.2}), origin},
      {DiscreteDistribution({{4, 5}, {2, 1}}, {0.5, 0.5}), Point{3, 3}},
      {DiscreteDistribution({{0}, {1}, {5}}, {0.3, 0.3, 0.4}), Point{1}},
  };
  const auto S = discrete_convolution(load("four_point_angular.json"), load("four_point_angular.json"), 1, 1);
  c.push_back({S, Point{2, 0}});
  return c;
}

}  // namespace

TEST(SymmetryProperties, ImplicationChain) {
  for (const auto& [P, mu] : corpus()) {
    const bool c = check_central_symmetry(P, mu).symmetric, a = check_angular_symmetry(P, mu).symmetric,
               h = check_halfspace_symmetry(P, mu).symmetric;
    EXPECT_TRUE(!c || a);
    EXPECT_TRUE(!a || h);
  }
}

TEST(SymmetryProperties, VerdictShape) {
  for (const auto& [P, mu] : corpus())
    for (auto k : {SymmetryKind::central, SymmetryKind::angular, SymmetryKind::halfspace}) {
      const auto v = check_symmetry(k, P, mu);
      if (v.symmetric) EXPECT_TRUE(v.center.has_value());
      else EXPECT_TRUE(v.witness.has_value());
    }
}

TEST(SymmetryProperties, AffineClosure) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> lam(-3, 3), off(-5, 5);
  for (const auto& [P, mu] : corpus())
    for (int t = 0; t < 10; ++t) {
      double l = lam(rng);
      if (std::abs(l) < 0.1) l = 1.3;
      Point b(P.dim());
      for (auto& v : b) v = off(rng);
      const auto Q = affine_image(P, l, b);
      Point m2(P.dim());
      for (std::size_t k = 0; k < m2.size(); ++k) m2[k] = l * mu[k] + b[k];
      for (auto k : {SymmetryKind::central, SymmetryKind::angular, SymmetryKind::halfspace})
        if (check_symmetry(k, P, mu).symmetric) {
          EXPECT_TRUE(check_symmetry(k, Q, m2).symmetric) << to_string(k);
        }
    }
}

TEST(SymmetryProperties, CentralClosureUnderCombination) {
  std::vector<std::pair<DiscreteDistribution, Point>> central;
  for (const auto& e : corpus())
    if (e.first.dim() == 2 && check_central_symmetry(e.first, e.second).symmetric) central.push_back(e);
  ASSERT_GE(central.size(), 3u);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2, 2);
  for (std::size_t i = 0; i < central.size(); ++i)
    for (std::size_t j = 0; j < central.size(); ++j) {
      const double a = u(rng), b = u(rng);
      const Point off{u(rng), u(rng)};
      const auto C = affine_image(discrete_convolution(central[i].first, central[j].first, a, b), 1.0, off);
      const Point mu{a * central[i].second[0] + b * central[j].second[0] + off[0],
                     a * central[i].second[1] + b * central[j].second[1] + off[1]};
      EXPECT_TRUE(check_central_symmetry(C, mu).symmetric);
    }
}

TEST(SymmetryProperties, CentreSearchFindsMean) {
  const DiscreteDistribution P({{4, 5}, {2, 1}}, {0.5, 0.5});
  const auto v = find_symmetry_center(SymmetryKind::central, P);
  ASSERT_TRUE(v.symmetric);
  EXPECT_EQ(*v.center, (Point{3, 3}));
  const auto w = find_symmetry_center(SymmetryKind::angular, load("four_point_angular.json"));
  ASSERT_TRUE(w.symmetric);
  EXPECT_EQ(*w.center, origin);
}

TEST(SymmetryProperties, SigmaTransformKeepsCentralSymmetry) {
  for (const auto& [P, mu] : corpus())
    if (check_central_symmetry(P, mu).symmetric) {
      EXPECT_TRUE(check_central_symmetry(discrete_sigma_transform(P, SigmaParam(2.5)), mu).symmetric);
    }
}
