// sdepth: depth computation, classification, simulation and symmetry checks.
//
// Exit codes: 0 success, 2 malformed input, 3 unmet precondition,
// 4 resource limit, 1 anything else.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdepth/sdepth.hpp"

namespace {

using sdepth::json;

struct Shared {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double tol = 1e-9;
  std::string out;
};

void add_shared(CLI::App* cmd, Shared& s) {
  cmd->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", s.threads, "Worker cap (0 = all cores); never changes results")->capture_default_str();
  cmd->add_option("--tol", s.tol, "Containment slack on barycentric coordinates")->capture_default_str();
  cmd->add_option("--out", s.out, "Output path (stdout when omitted)");
}

// Writes `body` to `path` (or stdout) and the config echo next to it (or to
// stderr when writing to stdout).
void emit(const std::string& path, const std::string& body, const json& config) {
  if (path.empty()) {
    std::cout << body;
    std::cerr << "config: " << config.dump() << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw sdepth::InputError("cannot write '" + path + "'");
  f << body;
  std::ofstream c(path + ".config.json", std::ios::binary);
  if (!c) throw sdepth::InputError("cannot write '" + path + ".config.json'");
  c << config.dump(2) << '\n';
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v;
    if (!sdepth::detail::parse_double(item, v)) throw sdepth::InputError(std::string(what) + ": bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw sdepth::InputError(std::string(what) + ": empty list");
  return out;
}

struct DepthFlags {
  std::string method = "simplex-enlarged";
  double sigma = 1.0;
  std::uint64_t approx = 0;
  std::uint64_t exact_cap = sdepth::kDefaultExactCap;
};

void add_depth_flags(CLI::App* cmd, DepthFlags& f) {
  cmd->add_option("--method", f.method, "simplicial|simplex-enlarged|dist-enlarged-blocks|dist-enlarged-full")
      ->capture_default_str();
  cmd->add_option("--sigma", f.sigma, "Enlargement factor (> 0)")->capture_default_str();
  cmd->add_option("--approx", f.approx, "Monte-Carlo simplex budget M (0 = exact)")->capture_default_str();
  cmd->add_option("--exact-cap", f.exact_cap, "Largest simplex count enumerated exactly")->capture_default_str();
}

sdepth::DepthConfig make_depth_config(const DepthFlags& f, const Shared& s) {
  sdepth::DepthConfig c;
  c.method = sdepth::parse_depth_method(f.method);
  c.sigma = sdepth::SigmaParam(f.sigma);
  if (f.approx > 0) c.budget = f.approx;
  c.seed = s.seed;
  c.tol = sdepth::GeomTolerance(s.tol);
  c.exact_cap = f.exact_cap;
  c.threads = s.threads;
  return c;
}

std::string coord_header(std::size_t d) {
  std::string h;
  for (std::size_t k = 0; k < d; ++k) h += "x" + std::to_string(k + 1) + ",";
  return h;
}

void write_coords(std::ostream& os, std::span<const double> x) {
  for (double v : x) os << sdepth::format_double(v) << ',';
}

int run_depth(const std::string& data_path, const std::string& query_path, const DepthFlags& f, const Shared& s) {
  const auto cfg = make_depth_config(f, s);
  const auto data = sdepth::read_points_csv_file(data_path);
  const auto queries = sdepth::read_points_csv_file(query_path);
  const auto depths = sdepth::compute_depths(data, queries, cfg);
  std::ostringstream os;
  os << coord_header(queries.dim()) << "depth,exact\n";
  for (std::size_t i = 0; i < queries.size(); ++i) {
    write_coords(os, queries.row(i));
    os << sdepth::format_double(depths[i].value) << ',' << (depths[i].exact ? 1 : 0) << '\n';
  }
  json config{{"subcommand", "depth"}, {"data", data_path}, {"query", query_path}, {"depth", sdepth::depth_config_to_json(cfg)}};
  emit(s.out, os.str(), config);
  return 0;
}

struct ClassifyFlags {
  std::string train1, train2, test, classifier = "maxdepth", model_out;
  int degree = 1;
  int restarts = 8;
};

int run_classify(const ClassifyFlags& c, const DepthFlags& f, const Shared& s) {
  const auto cfg = make_depth_config(f, s);
  const auto kind = sdepth::parse_classifier(c.classifier);
  const auto t1 = sdepth::read_points_csv_file(c.train1);
  const auto t2 = sdepth::read_points_csv_file(c.train2);
  const auto test = sdepth::read_points_csv_file(c.test);
  sdepth::detail::check_dims(t1.dim(), t2.dim(), "training sets");
  sdepth::detail::check_dims(t1.dim(), test.dim(), "test set");

  const bool dd = kind != sdepth::ClassifierKind::maxdepth;
  const auto queries = dd ? sdepth::detail::concat(sdepth::detail::concat(t1, t2), test) : test;
  sdepth::DepthConfig c1 = cfg, c2 = cfg;
  c1.seed = sdepth::substream_seed(s.seed, {1});
  c2.seed = sdepth::substream_seed(s.seed, {2});
  const auto a = sdepth::compute_depths(t1, queries, c1);
  const auto b = sdepth::compute_depths(t2, queries, c2);
  const std::size_t off = dd ? t1.size() + t2.size() : 0;

  std::optional<sdepth::DDModel> model;
  if (dd) {
    std::vector<double> d1(off), d2(off);
    std::vector<int> labels(off);
    for (std::size_t i = 0; i < off; ++i) {
      d1[i] = a[i].value;
      d2[i] = b[i].value;
      labels[i] = i < t1.size() ? 1 : 2;
    }
    sdepth::DDFitOptions opt;
    opt.restarts = c.restarts;
    opt.threads = s.threads;
    model = sdepth::fit_dd(d1, d2, labels, kind == sdepth::ClassifierKind::dd_linear ? 1 : c.degree, s.seed, opt);
    model->depth_cfg = cfg;
    if (!c.model_out.empty()) {
      std::ofstream m(c.model_out, std::ios::binary);
      if (!m) throw sdepth::InputError("cannot write '" + c.model_out + "'");
      m << sdepth::dd_model_to_json(*model).dump(2) << '\n';
    }
  }
  const auto outsiders = sdepth::outsider_mask(t1, t2, test, cfg.tol);
  std::ostringstream os;
  os << coord_header(test.dim()) << "depth1,depth2,class,outsider\n";
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double d1 = a[off + i].value, d2 = b[off + i].value;
    const int cls = dd ? sdepth::predict_dd(*model, d1, d2, test.row(i))
                       : sdepth::detail::pick_class(d1, d2, s.seed, test.row(i));
    write_coords(os, test.row(i));
    os << sdepth::format_double(d1) << ',' << sdepth::format_double(d2) << ',' << cls << ',' << (outsiders[i] ? 1 : 0)
       << '\n';
  }
  json config{{"subcommand", "classify"},
              {"train1", c.train1},
              {"train2", c.train2},
              {"test", c.test},
              {"classifier", c.classifier},
              {"degree", kind == sdepth::ClassifierKind::dd_poly ? c.degree : 1},
              {"restarts", c.restarts},
              {"depth", sdepth::depth_config_to_json(cfg)}};
  if (model) config["model"] = sdepth::dd_model_to_json(*model);
  emit(s.out, os.str(), config);
  return 0;
}

struct SimFlags {
  int scenario = 4;
  std::optional<std::size_t> n, n_test, reps, per_class;
  std::string sigma, delta, band, family, shift, method, classifier;
  std::optional<double> location_shift, scale_factor;
  bool scale_on_covariance = false;
  int degree = 1;
  int restarts = 8;
  std::optional<std::uint64_t> approx;
  bool exact = false;
  bool raw = false;
  bool no_complete = false;
};

int run_simulate(const SimFlags& f, const Shared& s) {
  auto cfg = sdepth::default_scenario(f.scenario);
  if (f.n) cfg.n_train = *f.n;
  if (f.n_test) cfg.n_test = *f.n_test;
  if (f.reps) cfg.reps = *f.reps;
  if (f.per_class) cfg.sim3_test_per_class = *f.per_class;
  if (!f.sigma.empty()) cfg.sigma_grid = parse_list(f.sigma, "--sigma");
  if (!f.delta.empty()) cfg.delta_grid = parse_list(f.delta, "--delta");
  if (!f.band.empty()) cfg.band = sdepth::parse_band(f.band);
  if (!f.family.empty()) cfg.family = sdepth::parse_family(f.family);
  if (!f.shift.empty()) cfg.shift = sdepth::parse_shift(f.shift);
  if (!f.method.empty()) cfg.method = sdepth::parse_depth_method(f.method);
  if (!f.classifier.empty()) cfg.classifier = sdepth::parse_classifier(f.classifier);
  if (f.location_shift) cfg.location_shift = *f.location_shift;
  if (f.scale_factor) cfg.scale_factor = *f.scale_factor;
  cfg.scale_on_covariance = f.scale_on_covariance;
  cfg.degree = cfg.classifier == sdepth::ClassifierKind::dd_poly ? f.degree : 1;
  cfg.restarts = f.restarts;
  if (f.approx) cfg.budget = *f.approx;
  if (f.exact) cfg.budget.reset();
  cfg.sim3_complete_curve = !f.no_complete;
  cfg.master_seed = s.seed;
  cfg.threads = s.threads;
  if (s.tol != 1e-9) throw sdepth::InputError("simulate uses the default containment tolerance");

  const auto table = sdepth::run_scenario(cfg);
  std::ostringstream csv;
  sdepth::write_result_csv(csv, table);
  json config = sdepth::scenario_config_to_json(cfg);
  config["subcommand"] = "simulate";
  if (s.out.empty()) {
    emit("", csv.str(), config);
    return 0;
  }
  emit(s.out + ".csv", csv.str(), config);
  std::ofstream j(s.out + ".json", std::ios::binary);
  if (!j) throw sdepth::InputError("cannot write '" + s.out + ".json'");
  j << sdepth::result_table_to_json(table, f.raw).dump(2) << '\n';
  return 0;
}

struct SymFlags {
  std::string dist, with, center, kind = "central";
  std::string convolve;
  std::optional<double> sigma;
};

int run_symmetry(const SymFlags& f, const Shared& s) {
  auto P = sdepth::distribution_from_json(sdepth::read_json_file(f.dist));
  const auto kind = sdepth::parse_symmetry_kind(f.kind);
  json config{{"subcommand", "symmetry"}, {"dist", f.dist}, {"kind", f.kind}};
  if (!f.convolve.empty()) {
    const auto ab = parse_list(f.convolve, "--convolve");
    if (ab.size() != 2) throw sdepth::InputError("--convolve expects a,b");
    const auto Q = f.with.empty() ? P : sdepth::distribution_from_json(sdepth::read_json_file(f.with));
    P = sdepth::discrete_convolution(P, Q, ab[0], ab[1]);
    config["convolve"] = ab;
    config["with"] = f.with.empty() ? f.dist : f.with;
  }
  if (f.sigma) {
    P = sdepth::discrete_sigma_transform(P, sdepth::SigmaParam(*f.sigma));
    config["sigma_transform"] = *f.sigma;
  }
  sdepth::SymmetryVerdict v;
  if (f.center.empty()) {
    v = sdepth::find_symmetry_center(kind, P);
    config["center"] = "search";
  } else {
    const auto mu = parse_list(f.center, "--center");
    v = sdepth::check_symmetry(kind, P, mu);
    config["center"] = mu;
  }
  json out{{"kind", f.kind}, {"symmetric", v.symmetric}, {"detail", v.detail}};
  out["center"] = v.center ? json(*v.center) : json(nullptr);
  out["witness"] = v.witness ? json(*v.witness) : json(nullptr);
  out["support_size"] = P.size();
  emit(s.out, out.dump(2) + "\n", config);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplicial depth and its sigma-enlarged variants"};
  app.require_subcommand(1);

  Shared shared;
  DepthFlags depth_flags;

  std::string data_path, query_path;
  auto* depth = app.add_subcommand("depth", "Depth of query points w.r.t. a data set");
  depth->add_option("--data", data_path, "Data CSV")->required();
  depth->add_option("--query", query_path, "Query CSV")->required();
  add_depth_flags(depth, depth_flags);
  add_shared(depth, shared);

  ClassifyFlags cls;
  auto* classify = app.add_subcommand("classify", "Two-class depth classification");
  classify->add_option("--train1", cls.train1, "Class 1 training CSV")->required();
  classify->add_option("--train2", cls.train2, "Class 2 training CSV")->required();
  classify->add_option("--test", cls.test, "Test CSV")->required();
  classify->add_option("--classifier", cls.classifier, "maxdepth|dd-linear|dd-poly")->capture_default_str();
  classify->add_option("--degree", cls.degree, "DD polynomial degree (dd-poly)")->capture_default_str();
  classify->add_option("--restarts", cls.restarts, "DD polynomial random restarts")->capture_default_str();
  classify->add_option("--model-out", cls.model_out, "Write the fitted DD model as JSON");
  add_depth_flags(classify, depth_flags);
  add_shared(classify, shared);

  SimFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Run a simulation scenario");
  simulate->add_option("--scenario", sim.scenario, "1..4")->required();
  simulate->add_option("--n", sim.n, "Training size per class");
  simulate->add_option("--n-test", sim.n_test, "Test size (split between classes)");
  simulate->add_option("--reps", sim.reps, "Replications");
  simulate->add_option("--per-class", sim.per_class, "Scenario 3 test points per class inside the band");
  simulate->add_option("--sigma", sim.sigma, "Comma-separated sigma grid");
  simulate->add_option("--delta", sim.delta, "Comma-separated delta grid (scenarios 2, 3)");
  simulate->add_option("--band", sim.band, "symmetric|asymmetric (scenarios 2, 3)");
  simulate->add_option("--family", sim.family, "normal|elliptical (scenario 1)");
  simulate->add_option("--shift", sim.shift, "location|scale|location-scale (scenario 1)");
  simulate->add_option("--location-shift", sim.location_shift, "Per-coordinate location difference (scenario 1)");
  simulate->add_option("--scale-factor", sim.scale_factor, "Scale multiplier (scenario 1)");
  simulate->add_flag("--scale-on-covariance", sim.scale_on_covariance, "Multiply the covariance, not the sd");
  simulate->add_option("--method", sim.method, "Depth method");
  simulate->add_option("--classifier", sim.classifier, "maxdepth|dd-linear|dd-poly");
  simulate->add_option("--degree", sim.degree, "DD polynomial degree");
  simulate->add_option("--restarts", sim.restarts, "DD polynomial random restarts");
  simulate->add_option("--approx", sim.approx, "Monte-Carlo simplex budget");
  simulate->add_flag("--exact", sim.exact, "Exact depths (no Monte-Carlo budget)");
  simulate->add_flag("--raw", sim.raw, "Include per-rep rates in the JSON table");
  simulate->add_flag("--no-complete", sim.no_complete, "Scenario 3: skip the unfiltered simplicial curve");
  add_shared(simulate, shared);

  SymFlags sym;
  auto* symmetry = app.add_subcommand("symmetry", "Exact symmetry check of a discrete distribution");
  symmetry->add_option("--dist", sym.dist, "Distribution JSON {support, weights}")->required();
  symmetry->add_option("--center", sym.center, "Comma-separated centre (searched when omitted)");
  symmetry->add_option("--kind", sym.kind, "central|angular|halfspace")->capture_default_str();
  symmetry->add_option("--convolve", sym.convolve, "Check a X + b Y instead, as a,b");
  symmetry->add_option("--with", sym.with, "Distribution of Y for --convolve (default: same as --dist)");
  symmetry->add_option("--sigma-transform", sym.sigma, "Check the sigma-transformed distribution");
  add_shared(symmetry, shared);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*depth) return run_depth(data_path, query_path, depth_flags, shared);
    if (*classify) return run_classify(cls, depth_flags, shared);
    if (*simulate) return run_simulate(sim, shared);
    if (*symmetry) return run_symmetry(sym, shared);
  } catch (const sdepth::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const sdepth::PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return 3;
  } catch (const sdepth::ResourceError& e) {
    std::cerr << "resource: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
