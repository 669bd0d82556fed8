#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "noether/dsl.hpp"
#include "noether/nonlocal_model.hpp"

using namespace noether;

TEST_CASE("series coefficients carry m^{1-2l}") {
  CHECK(series_coeff(0).value == 1);
  CHECK(series_coeff(0).mass_power == 1);
  CHECK(series_coeff(1).value == Rational(-1, 2));
  CHECK(series_coeff(3).mass_power == -5);
  CHECK(series_coeff(2).evaluate(2.0) == doctest::Approx(-1.0 / 64.0));
  auto t = series_table(30);
  for (int l = 0; l < 30; ++l) {
    CHECK(t[l + 1].value / t[l].value == make_rational(2 * l - 1, 2 * (l + 1)));
  }
}

TEST_CASE("truncated square root converges geometrically inside the radius") {
  for (double m : {0.5, 1.0, 3.0}) {
    for (double u : {-0.9, -0.3, 0.4, 0.9}) {
      double x = u * m * m;
      double prev = truncation_error(m, x, 10);
      for (int L = 20; L <= 80; L += 10) {
        double e = truncation_error(m, x, L);
        CHECK(e < prev);
        prev = e;
      }
      // The ratio over ten orders approaches |u|^10.
      double r = std::pow(truncation_error(m, x, 80) / truncation_error(m, x, 70), 0.1);
      CHECK(r == doctest::Approx(std::fabs(u)).epsilon(0.1));
    }
  }
}

TEST_CASE("two-sided kernel") {
  CHECK(two_sided_kernel(1.0, 0.2, -0.3, 80) == doctest::Approx(two_sided_kernel_closed(1.0, 0.2, -0.3)).epsilon(1e-14));
  // x = y: the kernel is the derivative of the square root.
  CHECK(two_sided_kernel_closed(2.0, 1.0, 1.0) == doctest::Approx(-1.0 / (2.0 * std::sqrt(3.0))));
}

TEST_CASE("momentum-space currents") {
  const double m = 1.5;
  std::vector<double> p{0.3, -0.4};
  CHECK(dispersion(m, p) == doctest::Approx(std::sqrt(m * m + 0.25)));
  auto on = FourMomentum::make_on_shell(m, p);
  CHECK(on.satisfies_shell(m));
  CHECK_FALSE(FourMomentum::make_off_shell(0.1, p).satisfies_shell(m));

  // Forward limit: J = (1, p/E) and T^0_0 = E.
  auto j = current_momentum(m, p, p);
  CHECK(j[0] == 1.0);
  CHECK(j[1] == doctest::Approx(0.3 / dispersion(m, p)));
  auto t = emt_momentum(m, p, p);
  CHECK(t[0][0] == doctest::Approx(dispersion(m, p)));

  auto alt = alternative_covariant_current(m, p, p);
  CHECK(alt[0] == doctest::Approx(1.0));
}

TEST_CASE("Ward identity holds off shell") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    double w = ward_defect(0.7, FourMomentum::make_off_shell(u(rng), a), FourMomentum::make_off_shell(u(rng), b));
    CHECK(std::fabs(w) < 1e-13);
  }
  // 3-4-5: m = 3, p = 4 gives E = 5; m = 3, p = 0 gives E = 3.
  CHECK(sgn(ward_defect_exact(3, 4, 0, Rational(7, 2), Rational(-1, 3))) == 0);
  CHECK_THROWS(ward_defect_exact(1, 1, 0, 0, 0));
}

TEST_CASE("first-order current has the standard form") {
  for (int dim : {2, 4}) {
    std::set<int> sp;
    for (int c = 1; c < dim; ++c) sp.insert(c);
    auto L = truncated_model_lagrangian(1, dim);
    Expr j = restrict_label(noether_current(L, SymmetryVariation::u1({"phi"})), "sigma", sp);
    Expr standard = restrict_label(parse_expr("1/2 m^-1 i (phi* * g[sigma,a] d[a] phi - g[sigma,a] d[a] phi* * phi)", dim),
                                   "sigma", sp);
    CHECK(j == standard);
  }
}

TEST_CASE("symbolic order guards") {
  CHECK_THROWS(truncated_model_lagrangian(kMaxSymbolicOrder + 1, 4));
  CHECK_NOTHROW(truncated_model_lagrangian(kMaxSymbolicOrder + 1, 2, true));
  CHECK_THROWS(gauged_functional_derivative(3, 4, 1));
  CHECK(gauge_field_name(2) == "A2");
}

TEST_CASE("gauged model is linear in the gauge field") {
  auto g = gauged_model_lagrangian(2, 3);
  std::set<std::string> gauge{gauge_field_name(0), gauge_field_name(1), gauge_field_name(2)};
  CHECK(truncate_degree(g.expr, gauge, 1) == g.expr);
  CHECK(truncate_degree(g.expr, gauge, 0) == truncated_model_lagrangian(2, 3).expr);
}
