#include "noether/exact.hpp"

#include <stdexcept>

namespace noether {

ExactComplex& ExactComplex::operator/=(const ExactComplex& o) {
  Rational den = o.re_ * o.re_ + o.im_ * o.im_;
  if (sgn(den) == 0) throw std::domain_error("ExactComplex: division by zero");
  Rational r = (re_ * o.re_ + im_ * o.im_) / den;
  Rational s = (im_ * o.re_ - re_ * o.im_) / den;
  re_ = std::move(r);
  im_ = std::move(s);
  return *this;
}

std::string ExactComplex::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  if (sgn(re_) == 0) {
    if (im_ == 1) return "i";
    if (im_ == -1) return "-i";
    return im_.get_str() + "*i";
  }
  std::string s = "(" + re_.get_str();
  s += sgn(im_) > 0 ? "+" : "-";
  Rational a = abs(im_);
  if (a != 1) s += a.get_str() + "*";
  return s + "i)";
}

Rational rational_pow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (sgn(base) == 0) throw std::domain_error("rational_pow: zero to a negative power");
    return Rational(1) / rational_pow(base, -exponent);
  }
  Rational result = 1;
  Rational b = base;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

Rational parse_rational(const std::string& text) {
  try {
    Rational r(text);
    if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
}

Rational exact_sqrt(const Rational& value) {
  if (sgn(value) < 0) throw std::domain_error("exact_sqrt: negative argument");
  mpz_class n = value.get_num();
  mpz_class d = value.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0 || mpz_perfect_square_p(d.get_mpz_t()) == 0) {
    throw std::domain_error("exact_sqrt: " + value.get_str() + " is not a rational square");
  }
  mpz_class rn = sqrt(n);
  mpz_class rd = sqrt(d);
  return Rational(rn, rd);
}

}  // namespace noether
