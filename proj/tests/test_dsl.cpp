#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "noether/acceptance.hpp"
#include "noether/dsl.hpp"
#include "noether/nonlocal_model.hpp"

using namespace noether;

TEST_CASE("free and summed labels") {
  Expr a = parse_expr("phi* * d[mu] phi", 4);
  CHECK(a.free_labels() == std::vector<std::string>{"mu"});
  CHECK(a.size() == 4);  // one selector per value of mu

  Expr b = parse_expr("g[mu,nu] d[mu] phi* * d[nu] phi", 4);
  CHECK(b.free_labels().empty());
  CHECK(b.size() == 4);
}

TEST_CASE("variance rule for repeated labels") {
  CHECK_THROWS_AS(parse_expr("d[mu] d[mu] phi", 4), ParseError);
  CHECK_NOTHROW(parse_expr("g[mu,nu] d[mu] d[nu] phi", 4));
  CHECK_NOTHROW(parse_expr("x[mu] d[mu] phi", 4));
  CHECK_THROWS_AS(parse_expr("x[mu] d[mu] d[mu] phi", 4), ParseError);
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_expr("phi * * phi", 4);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 6);
  }
  std::set<std::string> known{"phi", "phi*"};
  CHECK_THROWS_AS(parse_expr("chi phi", 4, &known), ParseError);
  CHECK_THROWS_AS(parse_expr("d[4] phi", 4), ParseError);
  CHECK_THROWS_AS(parse_expr("phi / 0", 4), ParseError);
}

TEST_CASE("laplacian and numeric division") {
  CHECK(parse_expr("lap phi", 3) == parse_expr("d[1] d[1] phi + d[2] d[2] phi", 3));
  CHECK(parse_expr("i/2 phi", 3) == parse_expr("1/2 i phi", 3));
  CHECK(parse_expr("m^-2 phi", 3) == Expr::field(3, "phi").times_mass(-2));
}

TEST_CASE("Lagrangian files") {
  auto src = parse_lagrangian_source(acceptance::shipped_lagrangians().at("su2_doublet"));
  CHECK(src.dim == 4);
  CHECK(src.complex_base == std::vector<std::string>{"u", "v"});
  REQUIRE(src.generators.count("t2") == 1);
  const auto& t2 = src.generators.at("t2");
  CHECK(t2[0][1] == ExactComplex(0, Rational(-1, 2)));
  CHECK(t2[1][0] == ExactComplex(0, Rational(1, 2)));

  const std::string bad = "dim 4\nfields phi\nL = phi* * chi\n";
  try {
    parse_lagrangian_source(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(describe_position(bad, e.position()) == "line 3, column 12");
  }
  CHECK_THROWS_AS(parse_lagrangian_source("dim 4\nfields phi\n"), ParseError);
  CHECK_THROWS_AS(parse_lagrangian_source("dim 7\nfields phi\nL = phi* phi\n"), ParseError);
  CHECK_THROWS_AS(parse_lagrangian_source("fields phi\nL = d[mu] phi* phi\n"), ParseError);
}

TEST_CASE("shipped first-order non-local file matches the builder") {
  auto src = parse_lagrangian_source(acceptance::shipped_lagrangians().at("nonlocal_l1"));
  CHECK(src.lagrangian == truncated_model_lagrangian(1, 4).expr);
}
