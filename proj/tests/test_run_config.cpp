#include <doctest.h>

#include "flowlab/run_config.hpp"

using namespace flowlab;
using nlohmann::json;

namespace {

json base() {
  return json::parse(R"cfg({
    "F": "sigma(1)", "n": 2, "N": 200, "mode": "Raw", "cfl": 0.5,
    "stop": {"min_mean_radius": 0.2},
    "initial": "sphere:2",
    "output": {"trace_csv": "t.csv", "summary_json": "s.json"}
  })cfg");
}

std::vector<std::string> problems(const json& doc) {
  try {
    config::parse_run_config(doc);
  } catch (const config::ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& ps, const std::string& key) {
  for (const auto& p : ps)
    if (p.rfind(key, 0) == 0) return true;
  return false;
}

}  // namespace

TEST_CASE("valid config parses") {
  const auto rc = config::parse_run_config(base());
  CHECK(rc.flow.n == 2);
  CHECK(rc.flow.N == 200);
  CHECK(rc.flow.mode == flow::Mode::Raw);
  REQUIRE(rc.shape);
  CHECK(rc.shape->r == 2.0);
  CHECK(rc.trace_csv == "t.csv");
  CHECK(*rc.flow.stop.min_mean_radius == 0.2);
}

TEST_CASE("N below the minimum is rejected") {
  auto d = base();
  d["N"] = 8;
  CHECK(mentions(problems(d), "N"));
}

TEST_CASE("unknown keys anywhere are rejected") {
  auto d = base();
  d["colour"] = "red";
  d["stop"]["whenever"] = 1;
  d["output"]["extra"] = "x";
  const auto ps = problems(d);
  CHECK(mentions(ps, "colour"));
  CHECK(mentions(ps, "stop.whenever"));
  CHECK(mentions(ps, "output.extra"));
}

TEST_CASE("all problems are reported together") {
  auto d = base();
  d.erase("F");
  d["mode"] = "Fast";
  d["cfl"] = 2.0;
  d["C_shift"] = 0.5;
  d["stop"] = json::object();
  const auto ps = problems(d);
  CHECK(mentions(ps, "F"));
  CHECK(mentions(ps, "mode"));
  CHECK(mentions(ps, "cfl"));
  CHECK(mentions(ps, "C_shift"));
  CHECK(mentions(ps, "stop"));
}

TEST_CASE("initial shape and csv are exclusive") {
  auto d = base();
  d["initial_csv"] = "p.csv";
  CHECK(mentions(problems(d), "initial"));
  d.erase("initial");
  d.erase("initial_csv");
  CHECK(mentions(problems(d), "initial"));
  d["initial"] = "blob:1";
  CHECK(mentions(problems(d), "initial"));
}

TEST_CASE("bad speed functions are reported") {
  auto d = base();
  d["F"] = "sigma(2) + sigma(1)";
  CHECK(mentions(problems(d), "F"));
  d["F"] = 3;
  CHECK(mentions(problems(d), "F"));
}

TEST_CASE("schema lists every accepted key") {
  const auto& s = config::run_config_schema();
  CHECK(s["additionalProperties"] == false);
  const json doc = base();
  for (const auto& [k, v] : doc.items()) CHECK(s["properties"].contains(k));
  CHECK(s["properties"]["N"]["minimum"] == 16);
}

TEST_CASE("unreadable file") {
  CHECK_THROWS_AS(config::load_run_config("/nonexistent/config.json"), config::ConfigError);
}
