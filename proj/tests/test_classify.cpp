#include <gtest/gtest.h>

#include <random>

#include "sdepth/classify.hpp"

using namespace sdepth;

namespace {

DepthConfig enlarged(double sigma) {
  DepthConfig c;
  c.method = DepthMethod::simplex_enlarged;
  c.sigma = SigmaParam(sigma);
  return c;
}

// Independent 0-1 loss with ties counted as half.
double scan_loss(double a, const std::vector<double>& d1, const std::vector<double>& d2, const std::vector<int>& y) {
  double l = 0;
  for (std::size_t i = 0; i < d1.size(); ++i) {
    const double v = d1[i] == 0 ? 0 : a * d1[i];
    l += d2[i] > v ? (y[i] != 2) : d2[i] < v ? (y[i] != 1) : 0.5;
  }
  return l;
}

}  // namespace

TEST(LabeledSample, LabelRange) {
  EXPECT_NO_THROW(LabeledSample({1, 2}, 2));
  EXPECT_THROW(LabeledSample({1, 2}, 3), InputError);
  EXPECT_THROW(LabeledSample({1, 2}, 0), InputError);
}

TEST(MaxDepth, ClearWinner) {
  const auto t1 = Dataset::from_scalars({0, 1}), t2 = Dataset::from_scalars({10, 11});
  EXPECT_EQ(max_depth_classify(t1, t2, Point{0.5}, enlarged(1), 0), 1);
  EXPECT_EQ(max_depth_classify(t1, t2, Point{10.5}, enlarged(1), 0), 2);
}

TEST(MaxDepth, OutsiderTieIsFairCoin) {
  const auto t1 = Dataset::from_scalars({0, 1}), t2 = Dataset::from_scalars({10, 11});
  int ones = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) ones += max_depth_classify(t1, t2, Point{5}, enlarged(1), s) == 1;
  EXPECT_GE(ones, 4700);
  EXPECT_LE(ones, 5300);
}

TEST(MaxDepth, EnlargementResolvesOutsider) {
  const auto t1 = Dataset::from_scalars({0, 1}), t2 = Dataset::from_scalars({10, 11});
  // sigma = 10: [-4.5, 5.5] holds 5, [5.5, 15.5] does not.
  for (std::uint64_t s = 0; s < 50; ++s) EXPECT_EQ(max_depth_classify(t1, t2, Point{5}, enlarged(10), s), 1);
  // sigma = 12: both enlarged intervals hold 5, so the coin decides.
  int ones = 0;
  for (std::uint64_t s = 0; s < 400; ++s) ones += max_depth_classify(t1, t2, Point{5}, enlarged(12), s) == 1;
  EXPECT_GT(ones, 150);
  EXPECT_LT(ones, 250);
}

TEST(MaxDepth, BatchMatchesSingle) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::vector<Point> a, b, q;
  for (int i = 0; i < 15; ++i) a.push_back({z(rng), z(rng)}), b.push_back({z(rng) + 2, z(rng)});
  for (int i = 0; i < 30; ++i) q.push_back({3 * z(rng), 3 * z(rng)});
  const auto t1 = Dataset::from_rows(a), t2 = Dataset::from_rows(b), test = Dataset::from_rows(q);
  const auto batch = max_depth_classify(t1, t2, test, enlarged(2), 9);
  for (std::size_t i = 0; i < q.size(); ++i) EXPECT_EQ(batch[i], max_depth_classify(t1, t2, q[i], enlarged(2), 9));
}

TEST(MaxDepth, AffineInvariantDecision) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    std::vector<Point> a, b;
    for (int i = 0; i < 8; ++i) a.push_back({z(rng), z(rng)}), b.push_back({z(rng) + 1.5, z(rng) + 0.5});
    const double A[4] = {z(rng), z(rng), z(rng), z(rng)}, off[2] = {z(rng), z(rng)};
    if (std::abs(A[0] * A[3] - A[1] * A[2]) < 0.2) continue;
    auto map = [&](const Point& p) { return Point{A[0] * p[0] + A[1] * p[1] + off[0], A[2] * p[0] + A[3] * p[1] + off[1]}; };
    std::vector<Point> ma, mb;
    for (auto& p : a) ma.push_back(map(p));
    for (auto& p : b) mb.push_back(map(p));
    const Point x{z(rng) + 0.7, z(rng)};
    const auto cfg = enlarged(1.5);
    const double da = compute_depth(Dataset::from_rows(a), x, cfg).value;
    const double db = compute_depth(Dataset::from_rows(b), x, cfg).value;
    const double ma_d = compute_depth(Dataset::from_rows(ma), map(x), cfg).value;
    const double mb_d = compute_depth(Dataset::from_rows(mb), map(x), cfg).value;
    // Skip configurations where rounding moved a boundary case.
    if (da != ma_d || db != mb_d || da == db) continue;
    EXPECT_EQ(max_depth_classify(Dataset::from_rows(a), Dataset::from_rows(b), x, cfg, 1),
              max_depth_classify(Dataset::from_rows(ma), Dataset::from_rows(mb), map(x), cfg, 1));
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(FitDD, PerfectSeparation) {
  std::vector<double> d1, d2;
  std::vector<int> y;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.5);
  for (int i = 0; i < 50; ++i) {
    const double a = u(rng);
    d1.push_back(a), d2.push_back(a * 0.5), y.push_back(1);
    d1.push_back(a * 0.5), d2.push_back(a), y.push_back(2);
  }
  for (int degree : {1, 3}) {
    const auto m = fit_dd(d1, d2, y, degree, 5);
    std::vector<int> pred;
    for (std::size_t i = 0; i < d1.size(); ++i) pred.push_back(predict_dd(m, d1[i], d2[i]));
    EXPECT_EQ(misclassification_rate(pred, y), 0.0) << degree;
  }
}

TEST(FitDD, MajorityBound) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> d1(200), d2(200);
  std::vector<int> y(200);
  for (int i = 0; i < 200; ++i) d1[i] = u(rng), d2[i] = u(rng), y[i] = coin(rng) ? 2 : 1;
  for (int degree : {1, 2, 5}) {
    const auto m = fit_dd(d1, d2, y, degree, 7);
    std::vector<int> pred;
    for (int i = 0; i < 200; ++i) pred.push_back(predict_dd(m, d1[i], d2[i]));
    EXPECT_LE(misclassification_rate(pred, y), 0.5);
  }
}

TEST(FitDD, LinearIsGlobalOptimum) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    std::mt19937_64 rng(100 + s);
    std::uniform_real_distribution<double> u(0, 1);
    const std::size_t n = 10 + s;
    std::vector<double> d1(n), d2(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = i % 2 ? 1 : 2;
      d1[i] = i % 7 == 0 ? 0.0 : u(rng);
      d2[i] = u(rng) * (y[i] == 2 ? 1.3 : 0.8);
    }
    const auto m = fit_dd(d1, d2, y, 1, s);
    const double got = scan_loss(m.coefficients[0], d1, d2, y);
    double best = INFINITY;
    // Brute-force: a dense slope scan plus each ratio and its neighbours.
    std::vector<double> slopes{0.0, -1e300, 1e300};
    for (int k = -2000; k <= 20000; ++k) slopes.push_back(k * 1e-3);
    for (std::size_t i = 0; i < n; ++i)
      if (d1[i] > 0) {
        const double r = d2[i] / d1[i];
        slopes.insert(slopes.end(), {r, std::nextafter(r, -INFINITY), std::nextafter(r, INFINITY)});
      }
    for (double a : slopes) best = std::min(best, scan_loss(a, d1, d2, y));
    EXPECT_EQ(got, best) << "seed " << s;
  }
}

TEST(FitDD, Errors) {
  const std::vector<double> d{0.1, 0.2, 0.3};
  EXPECT_THROW(fit_dd(d, d, std::vector<int>{1, 1, 1}, 1, 0), InputError);
  EXPECT_THROW(fit_dd(d, d, std::vector<int>{1, 2}, 1, 0), InputError);
  EXPECT_THROW(fit_dd(std::vector<double>{0.1}, std::vector<double>{0.1}, std::vector<int>{1}, 1, 0), InputError);
  EXPECT_THROW(fit_dd(d, d, std::vector<int>{1, 2, 1}, 11, 0), InputError);
  EXPECT_THROW(fit_dd(d, d, std::vector<int>{1, 2, 1}, 0, 0), InputError);
}

TEST(FitDD, DeterministicAcrossThreads) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> d1(80), d2(80);
  std::vector<int> y(80);
  for (int i = 0; i < 80; ++i) y[i] = 1 + i % 2, d1[i] = u(rng), d2[i] = u(rng) * (y[i] == 2 ? 1.5 : 1.0);
  DDFitOptions one, four;
  one.threads = 1;
  four.threads = 4;
  EXPECT_EQ(fit_dd(d1, d2, y, 4, 3, one).coefficients, fit_dd(d1, d2, y, 4, 3, four).coefficients);
}

TEST(PredictDD, Examples) {
  DDModel m;
  m.coefficients = {1.0};
  m.tie_seed = 42;
  EXPECT_EQ(predict_dd(m, 0.2, 0.3), 2);
  EXPECT_EQ(predict_dd(m, 0.3, 0.2), 1);
  const int c = predict_dd(m, 0, 0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(predict_dd(m, 0, 0), c);
  int ones = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    m.tie_seed = s;
    ones += predict_dd(m, 0, 0) == 1;
  }
  EXPECT_GT(ones, 900);
  EXPECT_LT(ones, 1100);
}

TEST(PredictDD, VerticalRule) {
  DDModel m;
  m.coefficients = {kVerticalSlope};
  EXPECT_EQ(predict_dd(m, 0.1, 0.9), 1);
  EXPECT_EQ(predict_dd(m, 0.0, 0.1), 2);
}

TEST(DDModel, Validation) {
  DDModel m;
  m.degree = 2;
  EXPECT_THROW(m.validate(), InputError);
  m.coefficients = {1.0, NAN};
  EXPECT_THROW(m.validate(), InputError);
  m.coefficients = {1.0, 2.0};
  EXPECT_NO_THROW(m.validate());
}

TEST(Outsiders, Mask) {
  const auto t1 = Dataset::from_rows({{0, 0}, {1, 0}, {0, 1}});
  const auto t2 = Dataset::from_rows({{5, 5}, {6, 5}, {5, 6}});
  const auto test = Dataset::from_rows({{0.2, 0.2}, {20, 20}, {1, 0}, {3, 3}, {5.2, 5.2}});
  EXPECT_EQ(outsider_mask(t1, t2, test), (std::vector<bool>{false, true, false, true, false}));
}

TEST(MisclassificationRate, Examples) {
  EXPECT_EQ(misclassification_rate(std::vector<int>{1, 2}, std::vector<int>{1, 2}), 0.0);
  EXPECT_EQ(misclassification_rate(std::vector<int>{1, 2}, std::vector<int>{2, 1}), 1.0);
  EXPECT_EQ(misclassification_rate(std::vector<int>{1, 2, 2, 1}, std::vector<int>{1, 2, 2, 2}), 0.25);
  EXPECT_THROW(misclassification_rate(std::vector<int>{1}, std::vector<int>{1, 2}), InputError);
  EXPECT_THROW(misclassification_rate(std::vector<int>{}, std::vector<int>{}), InputError);
}
