#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "noether/acceptance.hpp"
#include "noether/dsl.hpp"
#include "noether/nonlocal_model.hpp"
#include "noether/variational.hpp"
#include "support.hpp"

using namespace noether;

namespace {

IndexLabel fl(const char* n) { return IndexLabel::free(n); }

LagrangianSpec scalar_model(const std::string& text, int dim) {
  return LagrangianSpec::make(parse_expr(text, dim), {"phi", "phi*"});
}

LagrangianSpec shipped(const std::string& name) {
  return LagrangianSpec::from_source(parse_lagrangian_source(acceptance::shipped_lagrangians().at(name)));
}

// Current built by peeling one derivative at a time:
//   P d_{m1} X = d_{m1}(P X) - (d_{m1} P) X,   X = d_{m2..mn} g,
// where the first piece contributes selector(sigma, m1) P X and the second recurses.
void peel(const Expr& p, const std::vector<int>& rest, const Expr& gen, int sign, Expr& out) {
  if (rest.empty()) return;
  const int D = p.dim();
  Expr x = gen;
  for (std::size_t k = rest.size(); k-- > 1;) x = total_derivative(x, IndexLabel::concrete(rest[k]));
  out += Expr::selector(D, "sigma", rest[0]) * p * x * ExactComplex(sign);
  std::vector<int> tail(rest.begin() + 1, rest.end());
  peel(total_derivative(p, IndexLabel::concrete(rest[0])), tail, gen, -sign, out);
}

Expr recursive_current(const LagrangianSpec& L, const SymmetryVariation& v) {
  std::set<Atom> atoms;
  for (const auto& [mono, c] : L.expr.terms()) {
    for (const auto& a : mono.atoms) {
      if (!a.is_coord() && a.order() > 0) atoms.insert(a);
    }
  }
  auto gens = current_generator(v, L);
  Expr out(L.dim());
  for (const auto& a : atoms) peel(partial_wrt(L.expr, a), a.indices, gens.at(a.field), 1, out);
  return out;
}

}  // namespace

TEST_CASE("Euler-Lagrange for Klein-Gordon") {
  auto L = scalar_model("g[a,b] d[a] phi* * d[b] phi - m^2 phi* phi", 4);
  CHECK(euler_lagrange(L, "phi*") == parse_expr("-g[a,b] d[a] d[b] phi - m^2 phi", 4));
  auto P = scalar_model("phi* phi", 4);
  CHECK(euler_lagrange(P, "phi*") == parse_expr("phi", 4));
}

TEST_CASE("Euler-Lagrange with a squared d'Alembertian contains the fourth-order term") {
  auto L = scalar_model("(g[a,b] d[a] d[b] phi*) * (g[c,e] d[c] d[e] phi)", 3);
  Expr el = euler_lagrange(L, "phi*");
  CHECK(commute_derivatives(el) ==
        commute_derivatives(parse_expr("g[a,b] g[c,e] d[a] d[b] d[c] d[e] phi", 3)));
}

TEST_CASE("Euler-Lagrange agrees with the variation of the action") {
  // For L bilinear in (phi, phi*), S[phi + eta] - S[phi] = int EL(phi) eta exactly when
  // eta vanishes with its first max_order-1 derivatives on the unit box boundary.
  std::mt19937_64 rng(3);
  for (const char* name : {"box_squared", "third_order"}) {
    auto L = shipped(name);
    const int D = L.dim();
    Polynomial bump = Polynomial::constant(D, 1);
    for (int c = 0; c < D; ++c) {
      Polynomial xc = Polynomial::variable(D, c);
      Polynomial one_minus = Polynomial::constant(D, 1) - xc;
      for (int k = 0; k < L.max_order; ++k) bump = bump * xc * one_minus;
    }
    for (int trial = 0; trial < 3; ++trial) {
      EvalContext ctx = testing_support::random_fields(rng, D, 2);
      Polynomial eta = bump * testing_support::small_complex(rng);
      EvalContext shifted = ctx;
      shifted.fields["phi"] = ctx.fields["phi"] + eta;
      ExactComplex delta_s =
          eval_polynomial(L.expr, shifted).integrate_unit_box() - eval_polynomial(L.expr, ctx).integrate_unit_box();
      ExactComplex pairing = (eval_polynomial(euler_lagrange(L, "phi"), ctx) * eta).integrate_unit_box();
      CHECK(delta_s == pairing);
    }
  }
}

TEST_CASE("field variations") {
  const int D = 4;
  auto L = scalar_model("g[a,b] d[a] phi* * d[b] phi - m^2 phi* phi", D);
  auto u1 = apply_variation(SymmetryVariation::u1({"phi"}), L);
  CHECK(u1.at("phi") == parse_expr("-i phi", D));
  CHECK(u1.at("phi*") == parse_expr("i phi*", D));

  auto tr = apply_variation(SymmetryVariation::translation(IndexLabel::concrete(0)), L);
  CHECK(tr.at("phi") == parse_expr("-d[0] phi", D));

  auto rot = apply_variation(SymmetryVariation::rotation(IndexLabel::concrete(1), IndexLabel::concrete(2)), L);
  // -i (x_1 i d_2 - x_2 i d_1) phi with x_a = -x^a.
  CHECK(rot.at("phi") == parse_expr("-x[1] d[2] phi + x[2] d[1] phi", D));
  CHECK_THROWS(SymmetryVariation::rotation(fl("mu"), fl("mu")));
}

TEST_CASE("closed double sum equals the one-derivative-at-a-time recursion") {
  for (const char* name : {"kg", "box_squared", "third_order", "nonlocal_l1"}) {
    auto L = shipped(name);
    auto u1 = SymmetryVariation::u1({"phi"});
    CHECK(noether_current(L, u1) == recursive_current(L, u1));
    auto tr = SymmetryVariation::translation();
    Expr t = noether_current(L, tr) + Expr::delta(L.dim(), fl("sigma"), fl("mu")) * L.expr;
    CHECK(t == recursive_current(L, tr));
  }
  auto L3 = truncated_model_lagrangian(3, 2);
  CHECK(noether_current(L3, SymmetryVariation::u1({"phi"})) == recursive_current(L3, SymmetryVariation::u1({"phi"})));
}

TEST_CASE("currents are linear in the Lagrangian") {
  const int D = 3;
  Expr l1 = parse_expr("g[a,b] d[a] phi* * d[b] phi", D);
  Expr l2 = parse_expr("i phi* lap d[0] phi - i (lap d[0] phi*) phi", D);
  ExactComplex c(Rational(-3, 7));
  for (const auto& v : {SymmetryVariation::u1({"phi"}), SymmetryVariation::translation(), SymmetryVariation::rotation()}) {
    Expr lhs = noether_current(LagrangianSpec::make(l1 + l2 * c, {"phi", "phi*"}), v);
    Expr rhs = noether_current(LagrangianSpec::make(l1, {"phi", "phi*"}), v) +
               noether_current(LagrangianSpec::make(l2, {"phi", "phi*"}), v) * c;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("rotation current is antisymmetric in its pair") {
  for (const char* name : {"kg", "third_order", "box_squared"}) {
    auto L = shipped(name);
    Expr m = noether_current(L, SymmetryVariation::rotation());
    Expr swapped = rename_label(rename_label(rename_label(m, "mu", "tmp"), "nu", "mu"), "tmp", "nu");
    CHECK((m + swapped).is_zero());
  }
}

TEST_CASE("conserved currents of invariant Lagrangians") {
  for (const char* name : {"kg", "box_squared", "third_order", "nonlocal_l1"}) {
    auto L = shipped(name);
    for (const auto& v : {SymmetryVariation::u1({"phi"}), SymmetryVariation::translation(), SymmetryVariation::rotation()}) {
      CHECK(invariance_residual(L, v).is_zero());
      CHECK(divergence_defect(L, v).is_zero());
    }
  }
  auto L2 = truncated_model_lagrangian(2, 4);
  CHECK(divergence_defect(L2, SymmetryVariation::u1({"phi"})).is_zero());
  CHECK(component(noether_current(truncated_model_lagrangian(0, 4), SymmetryVariation::u1({"phi"})), {{"sigma", 0}}) ==
        parse_expr("phi* phi", 4));
}

TEST_CASE("non-invariant Lagrangians leave a residual") {
  const int D = 2;
  auto L = scalar_model("g[a,b] d[a] phi* * d[b] phi + phi* phi d[0] phi", D);
  auto u1 = SymmetryVariation::u1({"phi"});
  Expr residual = invariance_residual(L, u1);
  CHECK_FALSE(residual.is_zero());
  CHECK_FALSE(divergence_defect(L, u1).is_zero());
  std::mt19937_64 rng(5);
  EvalContext ctx = testing_support::random_fields(rng, D);
  CHECK_FALSE(eval_polynomial(residual, ctx).is_zero());
  // Still translation invariant.
  CHECK(divergence_defect(L, SymmetryVariation::translation()).is_zero());

  auto Lx = scalar_model("x[1] phi* phi", D);
  CHECK_FALSE(invariance_residual(Lx, SymmetryVariation::translation()).is_zero());
}

TEST_CASE("polynomial evaluation detects a damaged current") {
  const int D = 3;
  auto L = shipped("third_order");
  auto v = SymmetryVariation::u1({"phi"});
  Expr j = noether_current(L, v);
  j -= Expr::selector(D, "sigma", 1) * parse_expr("phi* d[2] d[1] phi", D);
  Expr raw = divergence(j, "sigma");
  for (const auto& [field, gen] : current_generator(v, L)) raw += euler_lagrange(L, field) * gen;
  std::mt19937_64 rng(9);
  CHECK_FALSE(eval_polynomial(raw, testing_support::random_fields(rng, D)).is_zero());
}

TEST_CASE("SU(2) doublet currents") {
  auto src = parse_lagrangian_source(acceptance::shipped_lagrangians().at("su2_doublet"));
  auto L = LagrangianSpec::from_source(src);
  auto v = SymmetryVariation::internal(src.complex_base, src.generators.at("t3"));
  // t3 = diag(1/2, -1/2): the u and v charge densities enter with opposite signs.
  Expr j0 = component(noether_current(L, v), {{"sigma", 0}});
  Expr expected = parse_expr("1/2 i (u* d[0] u - d[0] u* * u) - 1/2 i (v* d[0] v - d[0] v* * v)", 4);
  CHECK(j0 == expected);
  CHECK(divergence_defect(L, v).is_zero());
}

TEST_CASE("spec validation") {
  CHECK_THROWS(LagrangianSpec::make(parse_expr("d[mu] phi", 4), {"phi"}));
  CHECK_THROWS(LagrangianSpec::make(parse_expr("phi* chi", 4), {"phi", "phi*"}));
  CHECK(scalar_model("g[a,b] d[a] d[0] phi* * d[b] phi", 4).max_order == 2);
}
