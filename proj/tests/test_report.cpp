#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "fracspace/report.hpp"
#include "fracspace/types.hpp"

using namespace fracspace;

namespace {

RatioReport tiny_report() {
  RatioReport rep;
  rep.meta.op = "sharpness_scan:E_vs_F";
  rep.meta.fn = "gaussian(a=1)";
  rep.meta.p = 2.0;
  rep.meta.q = 2.0;
  rep.meta.threshold = 50.0;
  rep.meta.flags = {"one", "two"};
  rep.rows.push_back({0.5, 1.0 / 3.0, 2.0, 1.0 / 6.0, 1e-3, 2e-3});
  rep.rows.push_back({0.75, 1.5, 2.0, 0.75, 0.0, 0.0});
  rep.summary.min_ratio = 1.0 / 6.0;
  rep.summary.max_ratio = 0.75;
  rep.summary.band = 4.5;
  rep.summary.slope = -0.25;
  rep.summary.pass = true;
  return rep;
}

}  // namespace

TEST_CASE("doubles format at 17 significant digits, locale-free") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_double(-1e-2) == "-0.01");
  CHECK(format_double(1.0 - std::exp2(-10.0)) == "0.9990234375");
}

TEST_CASE("config text parses and renders deterministically") {
  const std::string text =
      "# a comment\n"
      "fn=gaussian(a=1)\n"
      "\n"
      "p=2   # trailing comment\n"
      "  q=3 r=0.5\n";
  const ConfigMap cfg = parse_config(text);
  REQUIRE(cfg.size() == 4);
  CHECK(cfg.at("fn") == "gaussian(a=1)");
  CHECK(cfg.at("p") == "2");
  CHECK(cfg.at("q") == "3");
  CHECK(cfg.at("r") == "0.5");
  CHECK(render_config(cfg) == "fn=gaussian(a=1) p=2 q=3 r=0.5");
  CHECK(parse_config(render_config(cfg)) == cfg);

  CHECK_THROWS_AS(parse_config("p=1\np=2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just words\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("=value\n"), ConfigError);
  CHECK_THROWS_AS(render_config(ConfigMap{{"k", "two words"}}), ConfigError);
}

TEST_CASE("csv output is byte-stable with the pinned header") {
  const RatioReport rep = tiny_report();
  const ConfigMap cfg = report_config(rep);
  const std::string csv = to_csv(rep, cfg);
  CHECK(csv == to_csv(rep, cfg));
  CHECK(csv.find("s,lhs,rhs,ratio,tail_est_lhs,tail_est_rhs\n") !=
        std::string::npos);
  CHECK(csv.find("# config: ") == 0);
  CHECK(csv.find("# verdict: PASS") != std::string::npos);
  CHECK(csv.find("flags=one;two") != std::string::npos);
  CHECK(csv.find("0.5,0.33333333333333331,2,0.16666666666666666,0.001,0.002\n") !=
        std::string::npos);
  CHECK(csv.find("0.75,1.5,2,0.75,0,0\n") != std::string::npos);
}

TEST_CASE("the report config echo round-trips") {
  const RatioReport rep = tiny_report();
  const ConfigMap cfg = report_config(rep);
  CHECK(cfg.at("report.op") == "sharpness_scan:E_vs_F");
  CHECK(cfg.at("report.fn") == "gaussian(a=1)");
  CHECK(cfg.at("p") == "2");
  CHECK(cfg.at("quad.nodes_per_decade") == "64");
  CHECK(cfg.at("quad.tail_tolerance") == "0.01");
  CHECK(parse_config(render_config(cfg)) == cfg);
}

TEST_CASE("json mirrors the csv rows and verdict") {
  const RatioReport rep = tiny_report();
  const ConfigMap cfg = report_config(rep);
  const std::string text = to_json(rep, cfg);
  CHECK(text == to_json(rep, cfg));
  const auto j = nlohmann::json::parse(text);
  CHECK(j["meta"]["verdict"] == "PASS");
  CHECK(j["meta"]["band"] == 4.5);
  CHECK(j["meta"]["config"]["fn"] == "gaussian(a=1)");
  CHECK(j["meta"]["flags"].size() == 2);
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["s"] == 0.5);
  CHECK(j["rows"][0]["ratio"] == double(1.0 / 6.0));
  CHECK(j["rows"][1]["tail_est_rhs"] == 0.0);
}
