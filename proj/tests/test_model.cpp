#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "bdp/model.hpp"
#include "bdp/model_io.hpp"

using namespace bdp;

TEST_CASE("kendall rates") {
  auto m = make_kendall(0.1, 0.5);
  CHECK(m.birth_rate(3) == Catch::Approx(0.3));
  CHECK(m.death_rate(3) == Catch::Approx(1.5));
  CHECK(m.death_rate(0) == 0.0);
  CHECK(m.reward_at(4) == 4.0);
  CHECK(m.taboo.lower.has_value());
  CHECK(*m.taboo.lower == 0);
}

TEST_CASE("mm_queue rates with and without a server cap") {
  auto m = make_mm_queue(2.0, 1.5, 2);
  CHECK(m.birth_rate(0) == 2.0);
  CHECK(m.birth_rate(9) == 2.0);
  CHECK(m.death_rate(1) == Catch::Approx(1.5));
  CHECK(m.death_rate(5) == Catch::Approx(3.0));  // min(n,c)*mu
  auto inf = make_mm_queue(2.0, 1.0);
  CHECK(inf.death_rate(7) == Catch::Approx(7.0));
}

TEST_CASE("sis rates and cost") {
  auto m = make_sis(100, 0.1, 8.0, 2.0, 0.1, 0.3);
  CHECK(m.birth_rate(50) == Catch::Approx(0.1 * 50 * 50));
  CHECK(m.death_rate(50) == Catch::Approx(50 * (8.0 + 2.0)));
  CHECK(m.reward_at(50) == Catch::Approx(0.1 * 2.0 + 0.3 * 50));
  CHECK(m.birth_rate(100) == 0.0);  // state cap
}

TEST_CASE("moran builder matches the expression form pointwise") {
  const StateIndex N = 50;
  const double f1 = 0.5, f2 = 1.0, u = 0.0, v = 0.03;
  auto m = make_moran(N, f1, f2, u, v);
  const std::map<std::string, double> params{
      {"N", 50.0}, {"f1", f1}, {"f2", f2}, {"u", u}, {"v", v}};
  auto lam = parse_rate_expr("(N-n)*(f1*n*(1-u)+f2*(N-n)*v)", params);
  auto mu = parse_rate_expr("n*(f2*(N-n)*(1-v)+f1*n*u)", params);
  for (StateIndex n = 0; n <= N; ++n) {
    CHECK(m.birth_rate(n) == Catch::Approx(lam.eval(n)).margin(1e-12));
    CHECK(m.death_rate(n) == Catch::Approx(mu.eval(n)).margin(1e-12));
  }
}

TEST_CASE("taboo validation") {
  TabooSet t;
  CHECK_THROWS_AS(t.validate(1), ModelError);  // empty
  t.lower = 0;
  t.upper = 10;
  CHECK_NOTHROW(t.validate(5));
  CHECK_THROWS_AS(t.validate(0), ModelError);
  CHECK_THROWS_AS(t.validate(12), ModelError);
  t.lower = 10;
  CHECK_THROWS_AS(t.validate(5), ModelError);  // lower >= upper
}

TEST_CASE("invalid rates are rejected at evaluation") {
  BdpModel m;
  m.birth = [](StateIndex) { return -1.0; };
  CHECK_THROWS_AS(m.birth_rate(1), ModelError);
}

static BdpModel from_json_text(const std::string& text) {
  return load_model(nlohmann::json::parse(text));
}

TEST_CASE("builtin model files") {
  auto m = from_json_text(R"js({"kind":"kendall","params":{"lambda":0.1,"mu":0.5}})js");
  CHECK(m.birth_rate(2) == Catch::Approx(0.2));
  CHECK_THROWS_AS(from_json_text(R"js({"kind":"kendall","params":{"lambda":0.1}})js"), ModelError);
  CHECK_THROWS_AS(from_json_text(R"js({"kind":"nope","params":{}})js"), ModelError);
}

TEST_CASE("custom model with expressions") {
  auto m = from_json_text(R"js({
    "kind": "custom",
    "params": {"N": 50, "lambda": 0.1},
    "birth": {"expr": "lambda*n*(N-n)"},
    "death": {"expr": "2*n"},
    "taboo": {"lower": 0},
    "state_cap": 50
  })js");
  CHECK(m.birth_rate(10) == Catch::Approx(0.1 * 10 * 40));
  CHECK(m.death_rate(10) == 20.0);
  CHECK(m.birth_rate(50) == 0.0);
}

TEST_CASE("tabulated rates require a state cap and full coverage") {
  CHECK_THROWS_WITH(from_json_text(R"js({
    "kind": "custom",
    "birth": {"table": [0, 1, 2]},
    "death": {"expr": "n"}
  })js"), Catch::Matchers::ContainsSubstring("state_cap"));
  CHECK_THROWS_AS(from_json_text(R"js({
    "kind": "custom",
    "state_cap": 5,
    "birth": {"table": [0, 1, 2]},
    "death": {"expr": "n"}
  })js"), ModelError);
  auto m = from_json_text(R"js({
    "kind": "custom",
    "state_cap": 2,
    "birth": {"table": [1.0, 2.0, 0.0]},
    "death": {"table": [0.0, 1.0, 2.0]},
    "taboo": {"upper": 2}
  })js");
  CHECK(m.birth_rate(1) == 2.0);
  CHECK(m.death_rate(2) == 2.0);
}

TEST_CASE("mu_0 != 0 is rejected at load time") {
  CHECK_THROWS_WITH(from_json_text(R"js({
    "kind": "custom",
    "birth": {"expr": "1"},
    "death": {"expr": "n+1"}
  })js"), Catch::Matchers::ContainsSubstring("mu_0"));
}

TEST_CASE("model file round trip via temp file") {
  const char* path = "bdp_test_model_roundtrip.json";
  {
    std::ofstream out(path);
    out << R"js({"kind":"sis","params":{"N":100,"lambda":0.1,"mu":8,"epsilon":2,"cost_a":0.1,"cost_b":0.3}})js";
  }
  auto m = load_model_file(path);
  CHECK(m.death_rate(10) == Catch::Approx(100.0));
  std::remove(path);
  CHECK_THROWS_AS(load_model_file("no_such_file.json"), ModelError);
}
