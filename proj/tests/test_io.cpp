#include <gtest/gtest.h>

#include <sstream>

#include "sdepth/io.hpp"

using namespace sdepth;

namespace {

Dataset parse(const std::string& s) {
  std::istringstream in(s);
  return read_points_csv(in);
}

}  // namespace

TEST(Csv, PlainAndHeader) {
  const auto a = parse("1,2\n3,4\n");
  EXPECT_EQ(a.rows(), (std::vector<Point>{{1, 2}, {3, 4}}));
  const auto b = parse("x,y\n1,2\n\n3,4\n");
  EXPECT_EQ(b.rows(), a.rows());
  const auto c = parse("1;2\r\n3\t4\r\n");
  EXPECT_EQ(c.rows(), a.rows());
  EXPECT_EQ(parse(" 0.5 \n-1e-3\n").rows(), (std::vector<Point>{{0.5}, {-1e-3}}));
}

TEST(Csv, Errors) {
  EXPECT_THROW(parse(""), InputError);
  EXPECT_THROW(parse("x,y\n"), InputError);
  EXPECT_THROW(parse("1,2\n3\n"), InputError);
  EXPECT_THROW(parse("1,2\nfoo,4\n"), InputError);
  EXPECT_THROW(parse("1,nan\n"), InputError);
  EXPECT_THROW(parse("1,inf\n"), InputError);
  EXPECT_THROW(read_points_csv_file("/nonexistent/points.csv"), InputError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  for (double v : {1.0 / 3, 2.0 / 7, 1e-300, 123456789.123, -0.000123})
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
}

TEST(Json, DistributionRoundTrip) {
  const DiscreteDistribution P({{1, 2}, {3, 4}}, {0.3, 0.7});
  const auto Q = distribution_from_json(json::parse(distribution_to_json(P).dump()));
  EXPECT_EQ(Q.support(), P.support());
  EXPECT_EQ(Q.weights(), P.weights());
  EXPECT_THROW(distribution_from_json(json{{"support", {{0.0}}}}), InputError);
  EXPECT_THROW(distribution_from_json(json{{"support", {{0.0}, {1.0}}}, {"weights", {0.3, 0.3}}}), InputError);
}

TEST(Json, DDModelRoundTrip) {
  DDModel m;
  m.degree = 2;
  m.coefficients = {0.5, -1.25};
  m.tie_seed = 77;
  m.depth_cfg.method = DepthMethod::dist_enlarged_blocks;
  m.depth_cfg.sigma = SigmaParam(2.5);
  m.depth_cfg.budget = 1000;
  m.depth_cfg.seed = 3;
  const auto r = dd_model_from_json(json::parse(dd_model_to_json(m).dump()));
  EXPECT_EQ(r.degree, 2);
  EXPECT_EQ(r.coefficients, m.coefficients);
  EXPECT_EQ(r.tie_seed, 77u);
  EXPECT_EQ(r.depth_cfg.method, DepthMethod::dist_enlarged_blocks);
  EXPECT_EQ(r.depth_cfg.sigma.value(), 2.5);
  EXPECT_EQ(r.depth_cfg.budget, std::optional<std::uint64_t>(1000));
  EXPECT_EQ(r.depth_cfg.seed, 3u);
  auto bad = dd_model_to_json(m);
  bad["coefficients"] = {1.0};
  EXPECT_THROW(dd_model_from_json(bad), InputError);
}

TEST(Json, DepthConfigExactHasNullBudget) {
  DepthConfig c;
  const auto j = depth_config_to_json(c);
  EXPECT_TRUE(j["budget"].is_null());
  EXPECT_EQ(j["method"], "simplicial");
  EXPECT_FALSE(depth_config_from_json(j).budget.has_value());
}

TEST(ResultCsv, Columns) {
  ResultTable t;
  t.scenario = 4;
  ResultRow r;
  r.setting = "n=100";
  r.sigma = 2;
  r.rates = {0.1, 0.3};
  r.outsider_rates = {NAN, NAN};
  detail::aggregate_row(r);
  t.rows.push_back(r);
  std::ostringstream out;
  write_result_csv(out, t);
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_EQ(header.rfind("scenario,setting,sigma_or_delta,mean,sd,outsider_mean,outsider_sd,reps", 0), 0u);
  EXPECT_EQ(line.rfind("4,n=100,2,0.2,", 0), 0u);
  const auto j = result_table_to_json(t, true);
  EXPECT_TRUE(j["rows"][0]["outsider_mean"].is_null());
  EXPECT_EQ(j["rows"][0]["rates"].size(), 2u);
  EXPECT_FALSE(result_table_to_json(t, false)["rows"][0].contains("rates"));
}
