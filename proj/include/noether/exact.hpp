#pragma once

#include <compare>
#include <string>

#include <gmpxx.h>

namespace noether {

using Rational = mpq_class;

/// Exact complex number with rational real and imaginary parts.
class ExactComplex {
public:
  ExactComplex() = default;
  ExactComplex(long re) : re_(re), im_(0) {}
  ExactComplex(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static ExactComplex i() { return {0, 1}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  ExactComplex conj() const { return {re_, -im_}; }

  ExactComplex& operator+=(const ExactComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ExactComplex& operator-=(const ExactComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ExactComplex& operator*=(const ExactComplex& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational s = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(s);
    return *this;
  }
  ExactComplex& operator/=(const ExactComplex& o);

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
  ExactComplex operator-() const { return {-re_, -im_}; }

  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// "a", "a*i", "(a+b*i)" with a, b reduced rationals.
  std::string to_string() const;

private:
  Rational re_{0};
  Rational im_{0};
};

/// num/den reduced to lowest terms (GMP arithmetic requires canonical operands).
inline Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Integer power of a nonzero rational (negative exponents allowed).
Rational rational_pow(const Rational& base, int exponent);

/// Parse "p", "p/q" or "-p/q".
Rational parse_rational(const std::string& text);

/// Exact square root of a rational that is the square of a rational; throws otherwise.
Rational exact_sqrt(const Rational& value);

}  // namespace noether
