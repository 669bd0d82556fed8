#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "noether/dsl.hpp"
#include "noether/tensor_expr.hpp"
#include "support.hpp"

using namespace noether;
using testing_support::random_fields;
using testing_support::small_complex;

namespace {

IndexLabel fl(const char* n) { return IndexLabel::free(n); }
IndexLabel at(int v) { return IndexLabel::concrete(v); }

const char* kPool[] = {
    "phi* phi",
    "d[0] phi * d[1] phi*",
    "x[1] d[1] d[0] phi * phi*",
    "g[a,b] d[a] phi* * d[b] phi",
    "(lap phi) phi*",
    "m^2 phi phi*",
    "x[0] x[2] phi",
    "d[2] d[0] d[1] phi*",
    "i m^-1 phi* * d[0] phi",
};

Expr random_expr(std::mt19937_64& rng, int dim = 3) {
  std::uniform_int_distribution<std::size_t> pick(0, std::size(kPool) - 1);
  Expr e(dim);
  for (int k = 0; k < 4; ++k) e += parse_expr(kPool[pick(rng)], dim) * small_complex(rng);
  return e;
}

}  // namespace

TEST_CASE("evaluation on polynomial fields") {
  const int D = 2;
  EvalContext ctx;
  ctx.fields["phi"] = Polynomial::variable(D, 0) * Polynomial::variable(D, 1);
  CHECK(eval_polynomial(parse_expr("d[0] phi", D), ctx) == Polynomial::variable(D, 1));

  // Signature check: d_0 f d_0 f - d_1 f d_1 f = 0 for f = x^0 + x^1.
  ctx.fields["phi"] = Polynomial::variable(D, 0) + Polynomial::variable(D, 1);
  CHECK(eval_polynomial(parse_expr("g[mu,nu] d[mu] phi * d[nu] phi", D), ctx).is_zero());

  SUBCASE("free labels must be bound") {
    CHECK_THROWS(eval_polynomial(parse_expr("d[mu] phi", D), ctx));
    ctx.bindings["mu"] = 1;
    CHECK(eval_polynomial(parse_expr("d[mu] phi", D), ctx) == Polynomial::constant(D, 1));
  }
  SUBCASE("missing field") { CHECK_THROWS(eval_polynomial(parse_expr("chi", D), ctx)); }
}

TEST_CASE("total derivative: Leibniz and coordinate rules") {
  const int D = 4;
  Expr lhs = total_derivative(parse_expr("phi* phi", D), fl("sigma"));
  CHECK(lhs == parse_expr("d[sigma] phi* * phi + phi* d[sigma] phi", D));

  Expr xs = total_derivative(parse_expr("x[mu] phi", D), fl("sigma"));
  CHECK(xs == parse_expr("delta[mu,sigma] phi + x[mu] d[sigma] phi", D));

  CHECK_THROWS(total_derivative(parse_expr("d[sigma] phi", D), fl("sigma")));
}

TEST_CASE("derivative index is prepended") {
  const int D = 3;
  Expr e = total_derivative(Expr::field(D, "phi", {at(1)}), at(2));
  REQUIRE(e.size() == 1);
  CHECK(e.terms().begin()->first.atoms.front().indices == std::vector<int>{2, 1});
}

TEST_CASE("deriv_wrt_atom is order sensitive") {
  const int D = 4;
  CHECK(deriv_wrt_atom(Expr::field(D, "psi", {fl("tau")}), "psi", {fl("mu")}) == Expr::delta(D, fl("mu"), fl("tau")));
  CHECK(deriv_wrt_atom(parse_expr("g[a,b] d[a] d[b] psi", D), "psi", {fl("mu"), fl("nu")}) ==
        Expr::metric(D, fl("mu"), fl("nu")));
  CHECK(deriv_wrt_atom(parse_expr("psi d[tau] psi", D), "psi", {fl("mu"), fl("nu")}).is_zero());

  Expr d01 = deriv_wrt_atom(Expr::field(D, "psi", {at(0), at(1)}), "psi", {fl("mu"), fl("nu")});
  Expr d10 = deriv_wrt_atom(Expr::field(D, "psi", {at(1), at(0)}), "psi", {fl("mu"), fl("nu")});
  CHECK(d01 == Expr::selector(D, "mu", 0) * Expr::selector(D, "nu", 1));
  CHECK_FALSE(d01 == d10);
  CHECK(commute_derivatives(Expr::field(D, "psi", {at(0), at(1)})) ==
        commute_derivatives(Expr::field(D, "psi", {at(1), at(0)})));
  CHECK_FALSE(Expr::field(D, "psi", {at(0), at(1)}) == Expr::field(D, "psi", {at(1), at(0)}));
}

TEST_CASE("metric contraction lowers and raises") {
  const int D = 4;
  // g^{mu nu} delta^tau_nu d_tau phi has the components of d^mu phi.
  Expr e = parse_expr("g[mu,nu] delta[tau,nu] d[tau] phi", D);
  CHECK(component(e, {{"mu", 0}}) == parse_expr("d[0] phi", D));
  CHECK(component(e, {{"mu", 2}}) == -parse_expr("d[2] phi", D));
  CHECK(parse_expr("3 phi + 4 phi", D) == parse_expr("7 phi", D));
  CHECK(parse_expr("phi - phi", D).is_zero());
}

TEST_CASE("canonical form does not depend on build order") {
  std::mt19937_64 rng(7);
  const int D = 3;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<Monomial, ExactComplex>> raw;
    std::uniform_int_distribution<int> n_atoms(0, 4), kind(0, 3), idx(0, D - 1), len(0, 3), mp(-2, 2);
    for (int t = 0; t < 8; ++t) {
      Monomial m;
      m.mass_power = mp(rng);
      int na = n_atoms(rng);
      for (int a = 0; a < na; ++a) {
        int k = kind(rng);
        if (k == 0) {
          m.atoms.push_back(Atom::coord(idx(rng)));
        } else {
          std::vector<int> mi(len(rng));
          for (auto& v : mi) v = idx(rng);
          m.atoms.push_back(Atom::deriv(k == 1 ? "phi" : k == 2 ? "phi*" : "chi", mi));
        }
      }
      ExactComplex c = small_complex(rng);
      // Same term split in two pieces with shuffled atoms.
      ExactComplex part = small_complex(rng);
      raw.emplace_back(m, c - part);
      std::shuffle(m.atoms.begin(), m.atoms.end(), rng);
      raw.emplace_back(m, part);
    }
    auto permuted = raw;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    Expr a = Expr::from_terms(D, {}, raw);
    Expr b = Expr::from_terms(D, {}, permuted);
    CHECK(a.terms() == b.terms());
    CHECK(canonicalize(a) == a);
    CHECK(canonicalize(canonicalize(a)).terms() == canonicalize(a).terms());
    for (const auto& [mono, coef] : a.terms()) {
      CHECK_FALSE(coef.is_zero());
      CHECK(std::is_sorted(mono.atoms.begin(), mono.atoms.end()));
    }
  }
}

TEST_CASE("calculus operations are linear") {
  std::mt19937_64 rng(11);
  const int D = 3;
  for (int trial = 0; trial < 40; ++trial) {
    Expr x = random_expr(rng), y = random_expr(rng);
    ExactComplex a = small_complex(rng), b = small_complex(rng);
    Expr combo = x * a + y * b;
    IndexLabel s = IndexLabel::concrete(static_cast<int>(trial % D));
    CHECK(total_derivative(combo, s) == total_derivative(x, s) * a + total_derivative(y, s) * b);
    Atom atom = Atom::deriv("phi", {0});
    CHECK(partial_wrt(combo, atom) == partial_wrt(x, atom) * a + partial_wrt(y, atom) * b);
    CHECK(deriv_wrt_atom(combo, "phi*", {fl("mu")}) ==
          deriv_wrt_atom(x, "phi*", {fl("mu")}) * a + deriv_wrt_atom(y, "phi*", {fl("mu")}) * b);
  }
}

TEST_CASE("evaluation commutes with total derivatives") {
  std::mt19937_64 rng(13);
  const int D = 3;
  for (int trial = 0; trial < 30; ++trial) {
    Expr e = random_expr(rng);
    EvalContext ctx = random_fields(rng, D);
    Polynomial base = eval_polynomial(e, ctx);
    for (int s = 0; s < D; ++s) {
      CHECK(eval_polynomial(total_derivative(e, at(s)), ctx) == base.derivative(s));
    }
    // Twice, against the analytic second derivative.
    CHECK(eval_polynomial(total_derivative(total_derivative(e, at(1)), at(2)), ctx) ==
          base.derivative(1).derivative(2));
  }
}

TEST_CASE("JSON round trip and rendering") {
  const int D = 4;
  Expr e = parse_expr("1/2 i m^-1 x[1] d[2] d[0] phi* * d[mu] phi + d[mu] phi", D);
  CHECK(from_json(to_json(e)) == e);
  CHECK(render(Expr(D)) == "0");
  CHECK(render(parse_expr("m phi", D)) == "m phi");
}

TEST_CASE("conjugation swaps field names") {
  const int D = 2;
  Expr e = parse_expr("i phi* d[0] phi + A phi", D);
  CHECK(conj(e, {"A"}) == parse_expr("-i phi d[0] phi* + A phi*", D));
  CHECK(conj(conj(e, {"A"}), {"A"}) == e);
}
