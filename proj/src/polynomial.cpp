#include "noether/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace noether {

Polynomial Polynomial::constant(int nvars, const ExactComplex& c) {
  Polynomial p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int which) {
  if (which < 0 || which >= nvars) throw std::out_of_range("Polynomial::variable: bad index");
  Polynomial p(nvars);
  Exponents e(nvars, 0);
  e[which] = 1;
  p.add_term(e, 1);
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : e) s += v;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Exponents& e, const ExactComplex& c) {
  if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("Polynomial: exponent size mismatch");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("Polynomial: variable count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("Polynomial: variable count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("Polynomial: variable count mismatch");
  Polynomial r(a.nvars_);
  Polynomial::Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int k = 0; k < a.nvars_; ++k) e[k] = ea[k] + eb[k];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial operator*(Polynomial a, const ExactComplex& c) {
  if (c.is_zero()) return Polynomial(a.nvars_);
  for (auto& [e, v] : a.terms_) v *= c;
  return a;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents f = e;
    f[var] -= 1;
    r.add_term(f, c * ExactComplex(e[var]));
  }
  return r;
}

Polynomial Polynomial::conj() const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c.conj());
  return r;
}

ExactComplex Polynomial::integrate_unit_box() const {
  ExactComplex total;
  for (const auto& [e, c] : terms_) {
    Rational w = 1;
    for (int v : e) w /= (v + 1);
    total += c * ExactComplex(w);
  }
  return total;
}

ExactComplex Polynomial::evaluate(const std::vector<Rational>& point) const {
  if (static_cast<int>(point.size()) != nvars_) throw std::invalid_argument("Polynomial::evaluate: bad point");
  ExactComplex total;
  for (const auto& [e, c] : terms_) {
    Rational w = 1;
    for (int k = 0; k < nvars_; ++k) w *= rational_pow(point[k], e[k]);
    total += c * ExactComplex(w);
  }
  return total;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) s += " + ";
    first = false;
    s += c.to_string();
    for (int k = 0; k < nvars_; ++k) {
      if (e[k] == 0) continue;
      s += "*x" + std::to_string(k);
      if (e[k] > 1) s += "^" + std::to_string(e[k]);
    }
  }
  return s;
}

}  // namespace noether
