#include <catch2/catch_amalgamated.hpp>

#include "bdp/expr.hpp"

using bdp::parse_rate_expr;
using bdp::ParseError;
using bdp::EvalError;

TEST_CASE("rate expressions evaluate with bound parameters") {
  const std::map<std::string, double> params{{"N", 10.0}, {"lambda", 0.1}};
  auto e = parse_rate_expr("n*(N-n)*lambda", params);
  CHECK(e.eval(3) == Catch::Approx(3.0 * 7.0 * 0.1));
  CHECK(e.eval(0) == 0.0);
  CHECK(e.eval(10) == 0.0);
}

TEST_CASE("min/max calls") {
  const std::map<std::string, double> params{{"c", 3.0}, {"mu", 1.0}};
  auto e = parse_rate_expr("min(n,c)*mu", params);
  CHECK(e.eval(5) == Catch::Approx(3.0));
  CHECK(e.eval(2) == Catch::Approx(2.0));
  auto m = parse_rate_expr("max(n, 2)", {});
  CHECK(m.eval(0) == 2.0);
  CHECK(m.eval(7) == 7.0);
}

TEST_CASE("operator precedence and associativity") {
  CHECK(parse_rate_expr("2+3*4", {}).eval(0) == 14.0);
  CHECK(parse_rate_expr("2*3^2", {}).eval(0) == 18.0);  // ^ binds tightest
  CHECK(parse_rate_expr("10-4-3", {}).eval(0) == 3.0);  // left-assoc
  CHECK(parse_rate_expr("(2+3)*4", {}).eval(0) == 20.0);
  CHECK(parse_rate_expr(" n + 1 ", {}).eval(4) == 5.0);
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    parse_rate_expr("n*(", {});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 3);
  }
  CHECK_THROWS_AS(parse_rate_expr("", {}), ParseError);
  CHECK_THROWS_AS(parse_rate_expr("n +", {}), ParseError);
  CHECK_THROWS_AS(parse_rate_expr("min(n)", {}), ParseError);
  CHECK_THROWS_AS(parse_rate_expr("min(n,1,2)", {}), ParseError);
  CHECK_THROWS_AS(parse_rate_expr("2 2", {}), ParseError);
}

TEST_CASE("unknown identifiers are rejected") {
  CHECK_THROWS_AS(parse_rate_expr("n*rho", {}), ParseError);
  CHECK_NOTHROW(parse_rate_expr("n*rho", {{"rho", 2.0}}));
}

TEST_CASE("runtime evaluation errors") {
  auto e = parse_rate_expr("1/n", {});
  CHECK_THROWS_AS(e.eval(0), EvalError);
  CHECK(e.eval(2) == 0.5);
}

TEST_CASE("unparse round-trips") {
  const std::map<std::string, double> params{{"N", 50.0}, {"lambda", 0.25}, {"c", 4.0}};
  const std::vector<std::string> sources{
      "n*(N-n)*lambda", "min(n,c)*2.5", "n^2+3*n+1", "max(N-n, 0)/2", "lambda"};
  for (const auto& src : sources) {
    auto e = parse_rate_expr(src, params);
    auto round = parse_rate_expr(e.unparse(), params);
    CHECK(round.unparse() == e.unparse());  // canonical form is a fixed point
    for (std::int64_t n = 0; n <= 50; n += 7)
      CHECK(round.eval(n) == e.eval(n));
  }
}
