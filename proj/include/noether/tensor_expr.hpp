#pragma once

// Exact tensor expressions over fields and their ordered higher derivatives.
//
// Storage is a canonical sum of terms. Every summed index is expanded over
// its concrete values 0..D-1 with the metric diag(+1,-1,...,-1) folded into
// the coefficient, and every free label is carried as a selector
// delta(label, c) on the term. Two expressions are equal iff their term maps
// are identical, so equality tests on derived currents are literal.
//
// The ordering of derivative indices inside an atom is never changed by any
// operation except the explicit commute_derivatives() quotient.

#include <compare>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "noether/exact.hpp"
#include "noether/polynomial.hpp"

namespace noether {

struct IndexLabel {
  enum class Kind { free, summed, concrete };

  Kind kind = Kind::free;
  std::string name;
  int value = -1;

  static IndexLabel free(std::string n) { return {Kind::free, std::move(n), -1}; }
  static IndexLabel summed(std::string n) { return {Kind::summed, std::move(n), -1}; }
  static IndexLabel concrete(int v) { return {Kind::concrete, {}, v}; }

  bool is_concrete() const { return kind == Kind::concrete; }
};

/// A derivative atom d_{i1..in} field, or a coordinate atom x^c.
struct Atom {
  enum class Kind : int { coord = 0, field = 1 };

  Kind kind = Kind::field;
  std::string field;
  std::vector<int> indices;

  static Atom coord(int c) { return {Kind::coord, {}, {c}}; }
  static Atom deriv(std::string f, std::vector<int> multi_index = {}) {
    return {Kind::field, std::move(f), std::move(multi_index)};
  }

  bool is_coord() const { return kind == Kind::coord; }
  int order() const { return is_coord() ? 0 : static_cast<int>(indices.size()); }

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

using Selectors = std::vector<std::pair<std::string, int>>;

/// Key of one canonical term: free-label selectors, power of m and a sorted multiset of atoms.
struct Monomial {
  Selectors selectors;
  int mass_power = 0;
  std::vector<Atom> atoms;

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

struct Coefficient {
  ExactComplex value;
  int mass_power = 0;
};

class Expr {
public:
  using TermMap = std::map<Monomial, ExactComplex>;

  explicit Expr(int dim = 4, std::vector<std::string> free_labels = {});

  static Expr constant(int dim, const ExactComplex& c, int mass_power = 0);
  static Expr field(int dim, const std::string& name, std::span<const IndexLabel> multi_index = {});
  static Expr field(int dim, const std::string& name, std::initializer_list<IndexLabel> multi_index) {
    return field(dim, name, std::span<const IndexLabel>(multi_index.begin(), multi_index.size()));
  }
  static Expr coord(int dim, const IndexLabel& index);
  /// x with a lowered index: g_{ab} x^b.
  static Expr coord_lower(int dim, const IndexLabel& index);
  static Expr metric(int dim, const IndexLabel& a, const IndexLabel& b);
  static Expr delta(int dim, const IndexLabel& a, const IndexLabel& b);
  /// delta(label, value): the free label takes the concrete value.
  static Expr selector(int dim, const std::string& label, int value);

  /// Builds a canonical expression from arbitrary (unsorted, unmerged) terms.
  static Expr from_terms(int dim, std::vector<std::string> free_labels,
                         const std::vector<std::pair<Monomial, ExactComplex>>& raw);

  int dim() const { return dim_; }
  const std::vector<std::string>& free_labels() const { return free_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(Monomial m, const ExactComplex& c);

  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const ExactComplex& c);
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(Expr a, const ExactComplex& c) { return a *= c; }
  friend Expr operator*(const ExactComplex& c, Expr a) { return a *= c; }
  /// Product; labels free in both operands are contracted (summed, no metric).
  friend Expr operator*(const Expr& a, const Expr& b);
  Expr operator-() const;

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_ && (a.terms_.empty() || a.free_ == b.free_);
  }

  /// Multiply every term by m^power.
  Expr times_mass(int power) const;

private:
  void check_signature(const Monomial& m) const;

  int dim_;
  std::vector<std::string> free_;
  TermMap terms_;
};

// Calculus.

/// d/dx^sigma with Leibniz rule; a free sigma must be fresh.
Expr total_derivative(const Expr& e, const IndexLabel& sigma);
/// Partial derivative with respect to one concrete atom treated as an independent variable.
Expr partial_wrt(const Expr& e, const Atom& atom);
/// d/d(d_{mu1..mun} field): order-sensitive; pattern labels must be fresh.
Expr deriv_wrt_atom(const Expr& e, const std::string& field, std::span<const IndexLabel> pattern);
inline Expr deriv_wrt_atom(const Expr& e, const std::string& field, std::initializer_list<IndexLabel> pattern) {
  return deriv_wrt_atom(e, field, std::span<const IndexLabel>(pattern.begin(), pattern.size()));
}
/// Divergence over a free label: sum_c d_c e|_{label=c}.
Expr divergence(const Expr& e, const std::string& label);

// Index manipulation.

Expr canonicalize(const Expr& e);
Expr contract(const Expr& e, const std::string& a, const std::string& b);
Expr restrict_label(const Expr& e, const std::string& label, const std::set<int>& values);
Expr rename_label(const Expr& e, const std::string& from, const std::string& to);
/// Component with every listed free label fixed (labels removed from the signature).
Expr component(const Expr& e, const std::map<std::string, int>& values);

// Field manipulation.

/// Complex conjugate: conjugates coefficients and swaps "f" <-> "f*" (fields in real_fields map to themselves).
Expr conj(const Expr& e, const std::set<std::string>& real_fields = {});
/// Quotient by commuting derivatives (sorts every multi-index). Only valid for smooth fields.
Expr commute_derivatives(const Expr& e);
/// Keep terms whose number of atoms belonging to `fields` is at most max_degree.
Expr truncate_degree(const Expr& e, const std::set<std::string>& fields, int max_degree);
std::set<std::string> fields_of(const Expr& e);
int max_derivative_order(const Expr& e, const std::string& field);

// Evaluation and I/O.

struct EvalContext {
  std::map<std::string, Polynomial> fields;
  std::map<std::string, int> bindings;
  Rational mass = 1;
};

/// Exact evaluation with polynomial field assignments; all free labels must be bound.
Polynomial eval_polynomial(const Expr& e, const EvalContext& ctx);

nlohmann::json to_json(const Expr& e);
Expr from_json(const nlohmann::json& j);
std::string render(const Expr& e);
std::string render_atom(const Atom& a);

/// Canonical field name helpers: "phi*" <-> "phi".
bool is_conjugate_name(const std::string& field);
std::string conjugate_name(const std::string& field);

}  // namespace noether
