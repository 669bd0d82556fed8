#pragma once

#include <random>

#include "noether/polynomial.hpp"
#include "noether/tensor_expr.hpp"

namespace testing_support {

inline noether::Rational small_rational(std::mt19937_64& rng, int span = 9) {
  std::uniform_int_distribution<int> num(-span, span), den(1, span);
  return noether::make_rational(num(rng), den(rng));
}

inline noether::ExactComplex small_complex(std::mt19937_64& rng) {
  return {small_rational(rng), small_rational(rng)};
}

/// `terms` random monomials of total degree <= max_degree in nvars variables.
inline noether::Polynomial random_polynomial(std::mt19937_64& rng, int nvars, int terms = 6, int max_degree = 3) {
  std::uniform_int_distribution<int> deg(0, max_degree), var(0, nvars - 1);
  noether::Polynomial p(nvars);
  for (int t = 0; t < terms; ++t) {
    noether::Polynomial::Exponents e(nvars, 0);
    int total = deg(rng);
    for (int k = 0; k < total; ++k) ++e[var(rng)];
    p.add_term(e, small_complex(rng));
  }
  return p;
}

/// Random assignment for phi and phi* = conj(phi).
inline noether::EvalContext random_fields(std::mt19937_64& rng, int dim, int max_degree = 3) {
  noether::EvalContext ctx;
  noether::Polynomial p = random_polynomial(rng, dim, 6, max_degree);
  ctx.fields["phi"] = p;
  ctx.fields["phi*"] = p.conj();
  std::uniform_int_distribution<int> mass(1, 5);
  ctx.mass = noether::make_rational(mass(rng), mass(rng));
  return ctx;
}

}  // namespace testing_support
