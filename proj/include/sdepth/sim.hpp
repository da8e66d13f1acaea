#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdepth/classify.hpp"
#include "sdepth/depth.hpp"
#include "sdepth/error.hpp"
#include "sdepth/parallel.hpp"
#include "sdepth/rng.hpp"
#include "sdepth/types.hpp"

namespace sdepth {

enum class Sim1Family { normal, elliptical };
enum class ShiftKind { location, scale, location_scale };
enum class ClassifierKind { maxdepth, dd_linear, dd_poly };
// Scenario 3 band shape; scenario 2 reuses it for the mean of P3 ((delta, 0) or (2, 0)).
enum class Band { symmetric, asymmetric };

inline std::string_view to_string(Sim1Family f) { return f == Sim1Family::normal ? "normal" : "elliptical"; }
inline std::string_view to_string(ShiftKind s) {
  switch (s) {
    case ShiftKind::location: return "location";
    case ShiftKind::scale: return "scale";
    case ShiftKind::location_scale: return "location-scale";
  }
  return "?";
}
inline std::string_view to_string(ClassifierKind c) {
  switch (c) {
    case ClassifierKind::maxdepth: return "maxdepth";
    case ClassifierKind::dd_linear: return "dd-linear";
    case ClassifierKind::dd_poly: return "dd-poly";
  }
  return "?";
}
inline std::string_view to_string(Band b) { return b == Band::symmetric ? "symmetric" : "asymmetric"; }

inline Sim1Family parse_family(std::string_view s) {
  if (s == "normal") return Sim1Family::normal;
  if (s == "elliptical") return Sim1Family::elliptical;
  throw InputError("unknown family '" + std::string(s) + "'");
}
inline ShiftKind parse_shift(std::string_view s) {
  for (auto k : {ShiftKind::location, ShiftKind::scale, ShiftKind::location_scale})
    if (s == to_string(k)) return k;
  throw InputError("unknown shift '" + std::string(s) + "'");
}
inline ClassifierKind parse_classifier(std::string_view s) {
  for (auto k : {ClassifierKind::maxdepth, ClassifierKind::dd_linear, ClassifierKind::dd_poly})
    if (s == to_string(k)) return k;
  throw InputError("unknown classifier '" + std::string(s) + "'");
}
inline Band parse_band(std::string_view s) {
  if (s == "symmetric") return Band::symmetric;
  if (s == "asymmetric") return Band::asymmetric;
  throw InputError("unknown band '" + std::string(s) + "'");
}

inline constexpr double kEllipticalR0 = 1.2481;

struct ScenarioConfig {
  int scenario = 4;

  // Scenario 1.
  Sim1Family family = Sim1Family::normal;
  ShiftKind shift = ShiftKind::location_scale;
  std::optional<double> location_shift;  // per coordinate; 2 (normal) or 4 (elliptical) when absent
  double scale_factor = 3.0;
  bool scale_on_covariance = false;  // false: standard deviation times scale_factor

  // scenarios 2 and 3.
  Band band = Band::symmetric;
  std::vector<double> delta_grid;
  std::size_t sim3_test_per_class = 100;
  std::uint64_t sim3_max_draws = 1'000'000;
  bool sim3_complete_curve = true;  // simplicial depth on the unfiltered training samples

  std::vector<double> sigma_grid;
  std::size_t n_train = 200;  // per class
  std::size_t n_test = 5000;  // split evenly between the classes
  std::size_t reps = 20;

  DepthMethod method = DepthMethod::simplex_enlarged;
  ClassifierKind classifier = ClassifierKind::dd_linear;
  int degree = 1;
  int restarts = 8;
  std::optional<std::uint64_t> budget = 20'000;
  std::uint64_t exact_cap = kDefaultExactCap;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;

  double resolved_location_shift() const {
    if (location_shift) return *location_shift;
    return family == Sim1Family::normal ? 2.0 : 4.0;
  }

  void validate() const {
    detail::require(scenario >= 1 && scenario <= 4, "scenario must be 1..4");
    detail::require(reps >= 1, "reps must be >= 1");
    detail::require(!sigma_grid.empty(), "sigma grid must be nonempty");
    for (double s : sigma_grid) detail::require(std::isfinite(s) && s > 0.0, "sigma values must be finite and > 0");
    detail::require(n_test >= 2, "n_test must be >= 2");
    detail::require(std::isfinite(scale_factor) && scale_factor > 0.0, "scale factor must be > 0");
    detail::require(degree >= 1 && degree <= kMaxDDDegree, "degree must lie in [1, 10]");
    detail::require(classifier != ClassifierKind::dd_linear || degree == 1, "dd-linear requires degree 1");
    detail::require(!budget || *budget >= 1, "depth budget must be >= 1");
    const std::size_t d = scenario == 4 ? 1 : 2;
    const std::size_t need = min_sample_size(method, d);
    if (n_train < need)
      throw InputError("n_train = " + std::to_string(n_train) + " is below the depth minimum of " + std::to_string(need));
    if (scenario == 2 || scenario == 3) {
      detail::require(!delta_grid.empty(), "delta grid must be nonempty");
      const double hi = scenario == 2 ? 4.0 : 2.0;
      for (double dl : delta_grid)
        detail::require(std::isfinite(dl) && dl > 0.0 && dl < hi,
                        "delta values must lie in (0, " + std::to_string(static_cast<int>(hi)) + ")");
    }
    if (scenario == 3) {
      detail::require(sim3_test_per_class >= 1, "sim3 test count must be >= 1");
      detail::require(sim3_max_draws >= 1, "sim3 draw cap must be >= 1");
    }
  }
};

namespace detail {

inline std::vector<double> arith_grid(double lo, double hi, double step) {
  std::vector<double> g;
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  for (std::size_t i = 0; i <= n; ++i) g.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
  return g;
}

}  // namespace detail

// Desk-scale defaults for each scenario; full-scale values are plain field
// overrides (n_train 500, reps 100 or 1000).
inline ScenarioConfig default_scenario(int scenario) {
  ScenarioConfig c;
  c.scenario = scenario;
  switch (scenario) {
    case 1:
      c.sigma_grid = {1, 1.2, 1.5, 2, 3, 4, 5, 7, 10, 15, 25};
      c.classifier = ClassifierKind::dd_linear;
      break;
    case 2:
      c.sigma_grid = {1, 1.2, 1.5, 2, 3, 4, 5};
      c.delta_grid = detail::arith_grid(0.1, 3.9, 0.1);
      c.classifier = ClassifierKind::maxdepth;
      break;
    case 3:
      c.sigma_grid = {1, 1.2, 1.5, 2, 3, 4, 5};
      c.delta_grid = detail::arith_grid(0.05, 1.95, 0.05);
      c.classifier = ClassifierKind::maxdepth;
      break;
    case 4:
      c.sigma_grid = detail::arith_grid(1.0, 6.0, 0.25);
      c.classifier = ClassifierKind::maxdepth;
      c.n_train = 100;
      c.budget.reset();
      break;
    default: throw InputError("scenario must be 1..4");
  }
  return c;
}

struct ResultRow {
  std::string setting;
  double sigma = 1.0;
  std::optional<double> delta;
  std::vector<double> rates;           // one per rep
  std::vector<double> outsider_rates;  // NaN for reps without outsiders
  double mean = 0.0, sd = 0.0;
  double outsider_mean = std::numeric_limits<double>::quiet_NaN();
  double outsider_sd = std::numeric_limits<double>::quiet_NaN();
  double median = 0.0, q25 = 0.0, q75 = 0.0, whisker_lo = 0.0, whisker_hi = 0.0;
  std::size_t reps = 0;
  std::size_t outsider_reps = 0;

  // The swept parameter: delta for scenarios 2 and 3, sigma otherwise.
  double sigma_or_delta() const { return delta ? *delta : sigma; }
};

struct ResultTable {
  int scenario = 0;
  std::vector<ResultRow> rows;
  // Per-rep smallest grid sigma giving every test point positive depth for at
  // least one class (NaN when no grid value does).
  std::vector<double> selected_sigma;
  std::map<std::string, double> summary;
};

// Type-7 quantile of sorted values.
inline double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

namespace detail {

inline std::pair<double, double> mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  const double n = static_cast<double>(v.size());
  const double m = pairwise_sum(v) / n;
  if (v.size() == 1) return {m, 0.0};
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
  return {m, std::sqrt(pairwise_sum(sq) / (n - 1.0))};
}

inline void aggregate_row(ResultRow& r) {
  r.reps = r.rates.size();
  std::tie(r.mean, r.sd) = mean_sd(r.rates);
  std::vector<double> out;
  for (double x : r.outsider_rates)
    if (!std::isnan(x)) out.push_back(x);
  r.outsider_reps = out.size();
  std::tie(r.outsider_mean, r.outsider_sd) = mean_sd(out);
  std::vector<double> s = r.rates;
  std::sort(s.begin(), s.end());
  r.median = quantile_sorted(s, 0.5);
  r.q25 = quantile_sorted(s, 0.25);
  r.q75 = quantile_sorted(s, 0.75);
  const double iqr = r.q75 - r.q25;
  r.whisker_lo = r.q25;
  r.whisker_hi = r.q75;
  for (double x : s) {
    if (x >= r.q25 - 1.5 * iqr) r.whisker_lo = std::min(r.whisker_lo, x);
    if (x <= r.q75 + 1.5 * iqr) r.whisker_hi = std::max(r.whisker_hi, x);
  }
}

inline Dataset draw_normal(Rng& rng, std::size_t n, double mx, double my, double scale) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> f(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    f[2 * i] = mx + scale * z(rng);
    f[2 * i + 1] = my + scale * z(rng);
  }
  return Dataset(2, std::move(f));
}

inline Dataset draw_uniform_1d(Rng& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> f(n);
  for (auto& x : f) x = u(rng);
  return Dataset(1, std::move(f));
}

inline Dataset concat(const Dataset& a, const Dataset& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  check_dims(a.dim(), b.dim(), "concat");
  std::vector<double> f = a.flat();
  f.insert(f.end(), b.flat().begin(), b.flat().end());
  return Dataset(a.dim(), std::move(f));
}

// Unnormalised elliptical density as a function of s = x^2/4 + y^2.
inline double elliptical_density_s(double s, double r0) {
  const double s0 = r0 * r0;
  const double t = std::max(s, s0);
  return 3.0 * t * t / (4.0 * std::numbers::pi * std::pow(1.0 + t * t * t, 1.5));
}

// Target over proposal in (u, y) = (x/2, y) coordinates, with rho^2 = s.
// Target there is 2 f(2u, y); proposal is the spherical bivariate t_1 density
// (1/(2 pi)) (1 + rho^2)^{-3/2}.
inline double elliptical_ratio(double s, double r0) {
  return 2.0 * elliptical_density_s(s, r0) * 2.0 * std::numbers::pi * std::pow(1.0 + s, 1.5);
}

inline double elliptical_envelope(double r0) {
  double m = 0.0;
  for (int i = 0; i <= 200'000; ++i) {
    const double rho = 1e-3 * i;
    m = std::max(m, elliptical_ratio(rho * rho, r0));
  }
  return 1.05 * m;
}

// Acceptance-rejection draws; returns the number of proposals used.
inline std::uint64_t sample_elliptical_into(double r0, std::size_t n, Rng& rng, double envelope, std::vector<double>& out) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::chi_squared_distribution<double> w(1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uint64_t proposals = 0;
  for (std::size_t got = 0; got < n;) {
    ++proposals;
    const double scale = 1.0 / std::sqrt(w(rng));
    const double u = z(rng) * scale, y = z(rng) * scale;
    const double ratio = elliptical_ratio(u * u + y * y, r0);
    if (!(ratio <= envelope))
      throw InternalError("elliptical sampler: density ratio " + std::to_string(ratio) + " exceeds the envelope " +
                          std::to_string(envelope));
    if (u01(rng) * envelope <= ratio) {
      out.push_back(2.0 * u);
      out.push_back(y);
      ++got;
    }
  }
  return proposals;
}

}  // namespace detail

// n draws from the elliptical density with inner radius r0, by
// acceptance-rejection from a t_1 proposal stretched by diag(2, 1).
inline Dataset sample_elliptical(double r0, std::size_t n, std::uint64_t seed) {
  detail::require(std::isfinite(r0) && r0 > 0.0, "sample_elliptical: r0 must be > 0");
  detail::require(n >= 1, "sample_elliptical: n must be >= 1");
  Rng rng = make_rng(seed);
  std::vector<double> out;
  out.reserve(2 * n);
  detail::sample_elliptical_into(r0, n, rng, detail::elliptical_envelope(r0), out);
  return Dataset(2, std::move(out));
}

// Splits by the closed band on the first coordinate: [-delta, delta]
// (symmetric) or [-delta, 0] (asymmetric).
inline std::pair<Dataset, Dataset> band_filter(const Dataset& points, Band band, double delta) {
  detail::require(points.empty() || points.dim() == 2, "band_filter: points must be two-dimensional");
  detail::require(std::isfinite(delta) && delta > 0.0, "band_filter: delta must be > 0");
  const double hi = band == Band::symmetric ? delta : 0.0;
  Dataset inside, outside;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points.row(i)[0];
    (x >= -delta && x <= hi ? inside : outside).push_back(points.row(i));
  }
  return {std::move(inside), std::move(outside)};
}

inline bool in_band(std::span<const double> p, Band band, double delta) {
  return p[0] >= -delta && p[0] <= (band == Band::symmetric ? delta : 0.0);
}

namespace detail {

struct ClassifyResult {
  std::vector<int> predicted;
  bool all_positive = true;  // every test point has positive depth for some class
};

// Classifies `test` against two training samples with the configured rule.
// Depths for training and test points come from one enumeration per class.
inline ClassifyResult classify_with(const Dataset& train1, const Dataset& train2, const Dataset& test,
                                    const DepthConfig& base, double sigma, std::uint64_t seed1, std::uint64_t seed2,
                                    std::uint64_t tie_seed, ClassifierKind kind, int degree, int restarts) {
  DepthConfig c1 = base, c2 = base;
  c1.sigma = c2.sigma = SigmaParam(sigma);
  c1.seed = seed1;
  c2.seed = seed2;
  const bool dd = kind != ClassifierKind::maxdepth;
  const Dataset queries = dd ? concat(concat(train1, train2), test) : test;
  const auto a = compute_depths(train1, queries, c1);
  const auto b = compute_depths(train2, queries, c2);
  const std::size_t off = dd ? train1.size() + train2.size() : 0;

  ClassifyResult res;
  res.predicted.resize(test.size());
  for (std::size_t i = 0; i < test.size(); ++i)
    if (!(a[off + i].value > 0.0 || b[off + i].value > 0.0)) res.all_positive = false;

  if (!dd) {
    for (std::size_t i = 0; i < test.size(); ++i)
      res.predicted[i] = pick_class(a[i].value, b[i].value, tie_seed, test.row(i));
    return res;
  }
  std::vector<double> d1(off), d2(off);
  std::vector<int> labels(off);
  for (std::size_t i = 0; i < off; ++i) {
    d1[i] = a[i].value;
    d2[i] = b[i].value;
    labels[i] = i < train1.size() ? 1 : 2;
  }
  DDFitOptions opt;
  opt.restarts = restarts;
  opt.threads = 1;
  DDModel model = fit_dd(d1, d2, labels, kind == ClassifierKind::dd_linear ? 1 : degree, tie_seed, opt);
  model.depth_cfg = base;
  for (std::size_t i = 0; i < test.size(); ++i)
    res.predicted[i] = predict_dd(model, a[off + i].value, b[off + i].value, test.row(i));
  return res;
}

inline double outsider_rate(const std::vector<int>& pred, const std::vector<int>& truth, const std::vector<bool>& mask) {
  std::size_t n = 0, wrong = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (mask[i]) {
      ++n;
      wrong += pred[i] != truth[i];
    }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(wrong) / static_cast<double>(n);
}

// Per-rep output, indexed like the table rows.
struct RepOutput {
  std::vector<double> rates;
  std::vector<double> outsider_rates;
  double selected_sigma = std::numeric_limits<double>::quiet_NaN();
};

struct RowKey {
  std::string setting;
  double sigma;
  std::optional<double> delta;
};

enum Stream : std::uint64_t { kTrain = 1, kTest = 2, kDepth1 = 3, kDepth2 = 4, kTie = 5 };

class ScenarioRunner {
 public:
  explicit ScenarioRunner(const ScenarioConfig& cfg) : cfg_(cfg) {
    base_.method = cfg.method;
    base_.budget = cfg.budget;
    base_.exact_cap = cfg.exact_cap;
    base_.threads = 1;
    if (cfg.scenario == 1 && cfg.family == Sim1Family::elliptical) envelope_ = elliptical_envelope(kEllipticalR0);
    build_rows();
  }

  const std::vector<RowKey>& rows() const { return rows_; }

  RepOutput run(std::size_t rep) const {
    RepOutput out;
    out.rates.assign(rows_.size(), std::numeric_limits<double>::quiet_NaN());
    out.outsider_rates = out.rates;
    switch (cfg_.scenario) {
      case 1: run_sim1(rep, out); break;
      case 2: run_sim2(rep, out); break;
      case 3: run_sim3(rep, out); break;
      case 4: run_sim4(rep, out); break;
      default: throw InputError("scenario must be 1..4");
    }
    return out;
  }

 private:
  std::uint64_t seed(std::size_t rep, std::uint64_t stream, std::uint64_t extra = 0) const {
    return substream_seed(cfg_.master_seed, {static_cast<std::uint64_t>(cfg_.scenario), rep, stream, extra});
  }

  std::string sim1_setting() const {
    return std::string(to_string(cfg_.family)) + "-" + std::string(to_string(cfg_.shift));
  }

  void build_rows() {
    auto sigma_label = [](double s) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%g", s);
      return std::string(buf);
    };
    switch (cfg_.scenario) {
      case 1:
        for (double s : cfg_.sigma_grid) rows_.push_back({sim1_setting(), s, std::nullopt});
        break;
      case 2:
      case 3:
        for (double s : cfg_.sigma_grid)
          for (double dl : cfg_.delta_grid)
            rows_.push_back({std::string(to_string(cfg_.band)) + "/sigma=" + sigma_label(s), s, dl});
        if (cfg_.scenario == 3 && cfg_.sim3_complete_curve)
          for (double dl : cfg_.delta_grid)
            rows_.push_back({std::string(to_string(cfg_.band)) + "/complete-simplicial", 1.0, dl});
        break;
      case 4:
        for (double s : cfg_.sigma_grid) rows_.push_back({"n=" + std::to_string(cfg_.n_train), s, std::nullopt});
        break;
    }
  }

  // Runs every sigma of the grid on one (train, test) draw; rows start at `row0`
  // with stride `stride`.
  void sweep_sigma(std::size_t rep, std::uint64_t extra, const Dataset& t1, const Dataset& t2, const Dataset& test,
                   const std::vector<int>& truth, const std::vector<bool>& outsiders, std::size_t row0,
                   std::size_t stride, RepOutput& out, bool select_sigma) const {
    double selected = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < cfg_.sigma_grid.size(); ++k) {
      const double s = cfg_.sigma_grid[k];
      const auto r = classify_with(t1, t2, test, base_, s, seed(rep, kDepth1, extra), seed(rep, kDepth2, extra),
                                   seed(rep, kTie, extra), cfg_.classifier, cfg_.degree, cfg_.restarts);
      const std::size_t row = row0 + k * stride;
      out.rates[row] = misclassification_rate(r.predicted, truth);
      out.outsider_rates[row] = outsider_rate(r.predicted, truth, outsiders);
      if (r.all_positive && !(selected <= s)) selected = s;
    }
    if (select_sigma) out.selected_sigma = selected;
  }

  static std::vector<int> truth_halves(std::size_t n1, std::size_t n2) {
    std::vector<int> t(n1, 1);
    t.resize(n1 + n2, 2);
    return t;
  }

  void run_sim1(std::size_t rep, RepOutput& out) const {
    Rng rng = make_rng(seed(rep, kTrain));
    const double shift = (cfg_.shift == ShiftKind::scale) ? 0.0 : cfg_.resolved_location_shift();
    const double sd_mult = cfg_.shift == ShiftKind::location ? 1.0
                           : cfg_.scale_on_covariance        ? std::sqrt(cfg_.scale_factor)
                                                             : cfg_.scale_factor;
    const std::size_t m1 = cfg_.n_test / 2, m2 = cfg_.n_test - m1;
    auto draw = [&](std::size_t n, bool second) {
      if (cfg_.family == Sim1Family::normal)
        return second ? draw_normal(rng, n, shift, shift, sd_mult) : draw_normal(rng, n, 0.0, 0.0, 1.0);
      std::vector<double> f;
      f.reserve(2 * n);
      sample_elliptical_into(kEllipticalR0, n, rng, envelope_, f);
      if (second)
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = sd_mult * f[i] + shift;
      return Dataset(2, std::move(f));
    };
    const Dataset t1 = draw(cfg_.n_train, false);
    const Dataset t2 = draw(cfg_.n_train, true);
    const Dataset test = concat(draw(m1, false), draw(m2, true));
    const auto truth = truth_halves(m1, m2);
    const auto outsiders = outsider_mask(t1, t2, test, base_.tol);
    sweep_sigma(rep, 0, t1, t2, test, truth, outsiders, 0, 1, out, true);
  }

  void run_sim2(std::size_t rep, RepOutput& out) const {
    Rng rng = make_rng(seed(rep, kTrain));
    const Dataset t1 = draw_normal(rng, cfg_.n_train, -4.0, 0.0, 1.0);
    const Dataset t2 = draw_normal(rng, cfg_.n_train, 4.0, 0.0, 1.0);
    const std::size_t m1 = cfg_.n_test / 2, m2 = cfg_.n_test - m1;
    const auto truth = truth_halves(m1, m2);
    const std::size_t nd = cfg_.delta_grid.size();
    for (std::size_t j = 0; j < nd; ++j) {
      const double dl = cfg_.delta_grid[j];
      Rng trng = make_rng(seed(rep, kTest, j));
      const double mx3 = cfg_.band == Band::symmetric ? dl : 2.0;
      const Dataset test = concat(draw_normal(trng, m1, -dl, 0.0, 1.0), draw_normal(trng, m2, mx3, 0.0, 1.0));
      const auto outsiders = outsider_mask(t1, t2, test, base_.tol);
      sweep_sigma(rep, j, t1, t2, test, truth, outsiders, j, nd, out, false);
    }
  }

  void run_sim3(std::size_t rep, RepOutput& out) const {
    const std::size_t nd = cfg_.delta_grid.size(), ns = cfg_.sigma_grid.size();
    for (std::size_t j = 0; j < nd; ++j) {
      const double dl = cfg_.delta_grid[j];
      Rng rng = make_rng(seed(rep, kTrain, j));
      const Dataset full1 = draw_normal(rng, cfg_.n_train, -2.0, 0.0, 1.0);
      const Dataset full2 = draw_normal(rng, cfg_.n_train, 2.0, 0.0, 1.0);
      const Dataset t1 = band_filter(full1, cfg_.band, dl).second;
      const Dataset t2 = band_filter(full2, cfg_.band, dl).second;
      const std::size_t need = min_sample_size(cfg_.method, 2);
      if (t1.size() < need || t2.size() < need)
        throw InsufficientDataError("scenario 3: too few training points outside the band at delta = " +
                                    std::to_string(dl));

      std::uint64_t draws = 0;
      auto fill_band = [&](double mx) {
        Dataset in;
        std::normal_distribution<double> z(0.0, 1.0);
        while (in.size() < cfg_.sim3_test_per_class) {
          if (++draws > cfg_.sim3_max_draws)
            throw ResourceError("scenario 3: draw cap of " + std::to_string(cfg_.sim3_max_draws) +
                                " reached at delta = " + std::to_string(dl));
          const double p[2] = {mx + z(rng), z(rng)};
          if (in_band(p, cfg_.band, dl)) in.push_back(p);
        }
        return in;
      };
      const Dataset a = fill_band(-2.0);
      const Dataset b = fill_band(2.0);
      const Dataset test = concat(a, b);
      const auto truth = truth_halves(a.size(), b.size());
      const auto outsiders = outsider_mask(t1, t2, test, base_.tol);
      sweep_sigma(rep, j, t1, t2, test, truth, outsiders, j, nd, out, false);

      if (cfg_.sim3_complete_curve) {
        DepthConfig simp = base_;
        simp.method = DepthMethod::simplicial;
        const auto r = classify_with(full1, full2, test, simp, 1.0, seed(rep, kDepth1, nd + j),
                                     seed(rep, kDepth2, nd + j), seed(rep, kTie, nd + j), cfg_.classifier,
                                     cfg_.degree, cfg_.restarts);
        const std::size_t row = ns * nd + j;
        out.rates[row] = misclassification_rate(r.predicted, truth);
        out.outsider_rates[row] = outsider_rate(r.predicted, truth, outsider_mask(full1, full2, test, base_.tol));
      }
    }
  }

  void run_sim4(std::size_t rep, RepOutput& out) const {
    Rng rng = make_rng(seed(rep, kTrain));
    const Dataset t1 = draw_uniform_1d(rng, cfg_.n_train, -2.0, -1.0);
    const Dataset t2 = draw_uniform_1d(rng, cfg_.n_train, 1.0, 2.0);
    const std::size_t m1 = cfg_.n_test / 2, m2 = cfg_.n_test - m1;
    const Dataset test = concat(draw_uniform_1d(rng, m1, -1.0, 0.0), draw_uniform_1d(rng, m2, 0.0, 1.0));
    const auto truth = truth_halves(m1, m2);
    const auto outsiders = outsider_mask(t1, t2, test, base_.tol);
    sweep_sigma(rep, 0, t1, t2, test, truth, outsiders, 0, 1, out, true);
  }

  ScenarioConfig cfg_;
  DepthConfig base_;
  std::vector<RowKey> rows_;
  double envelope_ = 0.0;
};

}  // namespace detail

// Runs every replication of a scenario. Reps run in parallel, each on its own
// substream of master_seed, so the table is identical for any thread count.
inline ResultTable run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  detail::ScenarioRunner runner(cfg);
  std::vector<detail::RepOutput> reps(cfg.reps);
  parallel_chunks(cfg.reps, cfg.reps, cfg.threads, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t r = b; r < e; ++r) reps[r] = runner.run(r);
  });

  ResultTable t;
  t.scenario = cfg.scenario;
  for (std::size_t i = 0; i < runner.rows().size(); ++i) {
    const auto& key = runner.rows()[i];
    ResultRow row;
    row.setting = key.setting;
    row.sigma = key.sigma;
    row.delta = key.delta;
    for (const auto& r : reps) {
      row.rates.push_back(r.rates[i]);
      row.outsider_rates.push_back(r.outsider_rates[i]);
    }
    detail::aggregate_row(row);
    t.rows.push_back(std::move(row));
  }

  if (cfg.scenario == 1 || cfg.scenario == 4) {
    for (const auto& r : reps) t.selected_sigma.push_back(r.selected_sigma);
    std::vector<double> sel;
    for (double s : t.selected_sigma)
      if (!std::isnan(s)) sel.push_back(s);
    std::sort(sel.begin(), sel.end());
    t.summary["selected_sigma_median"] = quantile_sorted(sel, 0.5);
    t.summary["selected_sigma_reps"] = static_cast<double>(sel.size());
    // Grid sigma with the smallest median rate (first on ties).
    std::size_t best = 0;
    for (std::size_t i = 1; i < t.rows.size(); ++i)
      if (t.rows[i].median < t.rows[best].median) best = i;
    t.summary["argmin_sigma_median_rate"] = t.rows[best].sigma;
    t.summary["min_median_rate"] = t.rows[best].median;
  }
  return t;
}

}  // namespace sdepth
