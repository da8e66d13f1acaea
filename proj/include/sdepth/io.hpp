#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "sdepth/classify.hpp"
#include "sdepth/depth.hpp"
#include "sdepth/distribution.hpp"
#include "sdepth/error.hpp"
#include "sdepth/sim.hpp"
#include "sdepth/types.hpp"

namespace sdepth {

using json = nlohmann::json;

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == ';' || c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(' ');
    const auto e = f.find_last_not_of(' ');
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

inline bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

}  // namespace detail

// Plain numeric CSV, one point per row. A first row that does not parse as
// numbers is taken as a header. Blank lines are skipped.
inline Dataset read_points_csv(std::istream& in, const std::string& what = "input") {
  std::string line;
  std::size_t lineno = 0, dim = 0;
  std::vector<double> flat;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = detail::split_fields(line);
    std::vector<double> row;
    bool numeric = true;
    for (const auto& f : fields) {
      double v;
      if (!detail::parse_double(f, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw InputError(what + ": line " + std::to_string(lineno) + " is not numeric");
    }
    first = false;
    if (dim == 0) dim = row.size();
    if (row.size() != dim)
      throw InputError(what + ": line " + std::to_string(lineno) + " has " + std::to_string(row.size()) +
                       " columns, expected " + std::to_string(dim));
    for (double v : row)
      if (!std::isfinite(v)) throw InputError(what + ": line " + std::to_string(lineno) + " has a non-finite value");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  if (dim == 0) throw InputError(what + ": no data rows");
  return Dataset(dim, std::move(flat));
}

inline Dataset read_points_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_points_csv(in, path);
}

// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// ---- distributions ----------------------------------------------------------

inline DiscreteDistribution distribution_from_json(const json& j) {
  try {
    auto support = j.at("support").get<std::vector<Point>>();
    auto weights = j.at("weights").get<std::vector<double>>();
    return DiscreteDistribution(std::move(support), std::move(weights));
  } catch (const json::exception& e) {
    throw InputError(std::string("distribution JSON: ") + e.what());
  }
}

inline json distribution_to_json(const DiscreteDistribution& P) {
  return json{{"support", P.support()}, {"weights", P.weights()}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

// ---- configs and models -----------------------------------------------------

inline json depth_config_to_json(const DepthConfig& c) {
  json j{{"method", std::string(to_string(c.method))},
         {"sigma", c.effective_sigma()},
         {"seed", c.seed},
         {"tol", c.tol.eps},
         {"exact_cap", c.exact_cap}};
  j["budget"] = c.budget ? json(*c.budget) : json(nullptr);
  return j;
}

inline DepthConfig depth_config_from_json(const json& j) {
  try {
    DepthConfig c;
    c.method = parse_depth_method(j.at("method").get<std::string>());
    c.sigma = SigmaParam(j.value("sigma", 1.0));
    if (j.contains("budget") && !j["budget"].is_null()) c.budget = j["budget"].get<std::uint64_t>();
    c.seed = j.value("seed", std::uint64_t{0});
    c.tol = GeomTolerance(j.value("tol", 1e-9));
    c.exact_cap = j.value("exact_cap", kDefaultExactCap);
    return c;
  } catch (const json::exception& e) {
    throw InputError(std::string("depth config JSON: ") + e.what());
  }
}

inline json dd_model_to_json(const DDModel& m) {
  return json{{"degree", m.degree},
              {"coefficients", m.coefficients},
              {"depth_cfg", depth_config_to_json(m.depth_cfg)},
              {"tie_seed", m.tie_seed}};
}

inline DDModel dd_model_from_json(const json& j) {
  try {
    DDModel m;
    m.degree = j.at("degree").get<int>();
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.depth_cfg = depth_config_from_json(j.at("depth_cfg"));
    m.tie_seed = j.at("tie_seed").get<std::uint64_t>();
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw InputError(std::string("DD model JSON: ") + e.what());
  }
}

inline json scenario_config_to_json(const ScenarioConfig& c) {
  json j{{"scenario", c.scenario},
         {"sigma_grid", c.sigma_grid},
         {"n_train", c.n_train},
         {"n_test", c.n_test},
         {"reps", c.reps},
         {"method", std::string(to_string(c.method))},
         {"classifier", std::string(to_string(c.classifier))},
         {"degree", c.degree},
         {"restarts", c.restarts},
         {"exact_cap", c.exact_cap},
         {"master_seed", c.master_seed}};
  j["budget"] = c.budget ? json(*c.budget) : json(nullptr);
  if (c.scenario == 1) {
    j["family"] = std::string(to_string(c.family));
    j["shift"] = std::string(to_string(c.shift));
    j["location_shift"] = c.resolved_location_shift();
    j["scale_factor"] = c.scale_factor;
    j["scale_on_covariance"] = c.scale_on_covariance;
  }
  if (c.scenario == 2 || c.scenario == 3) {
    j["band"] = std::string(to_string(c.band));
    j["delta_grid"] = c.delta_grid;
  }
  if (c.scenario == 3) {
    j["sim3_test_per_class"] = c.sim3_test_per_class;
    j["sim3_max_draws"] = c.sim3_max_draws;
    j["sim3_complete_curve"] = c.sim3_complete_curve;
  }
  return j;
}

// ---- result tables ----------------------------------------------------------

inline void write_result_csv(std::ostream& out, const ResultTable& t) {
  out << "scenario,setting,sigma_or_delta,mean,sd,outsider_mean,outsider_sd,reps,sigma,median,q25,q75,whisker_lo,"
         "whisker_hi,outsider_reps\n";
  for (const auto& r : t.rows)
    out << t.scenario << ',' << r.setting << ',' << format_double(r.sigma_or_delta()) << ',' << format_double(r.mean)
        << ',' << format_double(r.sd) << ',' << format_double(r.outsider_mean) << ',' << format_double(r.outsider_sd)
        << ',' << r.reps << ',' << format_double(r.sigma) << ',' << format_double(r.median) << ','
        << format_double(r.q25) << ',' << format_double(r.q75) << ',' << format_double(r.whisker_lo) << ','
        << format_double(r.whisker_hi) << ',' << r.outsider_reps << '\n';
}

// NaN becomes null.
inline json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

inline json result_table_to_json(const ResultTable& t, bool include_raw) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row{{"setting", r.setting},
             {"sigma", r.sigma},
             {"sigma_or_delta", r.sigma_or_delta()},
             {"mean", number_or_null(r.mean)},
             {"sd", number_or_null(r.sd)},
             {"outsider_mean", number_or_null(r.outsider_mean)},
             {"outsider_sd", number_or_null(r.outsider_sd)},
             {"median", number_or_null(r.median)},
             {"q25", number_or_null(r.q25)},
             {"q75", number_or_null(r.q75)},
             {"whisker_lo", number_or_null(r.whisker_lo)},
             {"whisker_hi", number_or_null(r.whisker_hi)},
             {"reps", r.reps},
             {"outsider_reps", r.outsider_reps}};
    row["delta"] = r.delta ? json(*r.delta) : json(nullptr);
    if (include_raw) {
      json raw = json::array(), raw_out = json::array();
      for (double v : r.rates) raw.push_back(number_or_null(v));
      for (double v : r.outsider_rates) raw_out.push_back(number_or_null(v));
      row["rates"] = raw;
      row["outsider_rates"] = raw_out;
    }
    rows.push_back(std::move(row));
  }
  json j{{"scenario", t.scenario}, {"rows", rows}};
  json summary = json::object();
  for (const auto& [k, v] : t.summary) summary[k] = number_or_null(v);
  j["summary"] = summary;
  if (!t.selected_sigma.empty()) {
    json sel = json::array();
    for (double v : t.selected_sigma) sel.push_back(number_or_null(v));
    j["selected_sigma"] = sel;
  }
  return j;
}

}  // namespace sdepth
