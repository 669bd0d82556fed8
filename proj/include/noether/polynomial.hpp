#pragma once

#include <map>
#include <string>
#include <vector>

#include "noether/exact.hpp"

namespace noether {

/// Multivariate polynomial in x^0..x^{D-1} with exact complex rational coefficients.
class Polynomial {
public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const ExactComplex& c);
  static Polynomial variable(int nvars, int which);

  int nvars() const { return nvars_; }
  const std::map<Exponents, ExactComplex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add_term(const Exponents& e, const ExactComplex& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const ExactComplex& c);
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Polynomial derivative(int var) const;
  Polynomial conj() const;
  /// Exact integral over the unit box [0,1]^D.
  ExactComplex integrate_unit_box() const;
  ExactComplex evaluate(const std::vector<Rational>& point) const;

  std::string to_string() const;

private:
  int nvars_;
  std::map<Exponents, ExactComplex> terms_;
};

}  // namespace noether
