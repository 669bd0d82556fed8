#include "noether/tensor_expr.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace noether {

namespace {

int metric_sign(int c) { return c == 0 ? 1 : -1; }

void check_concrete(int dim, int v) {
  if (v < 0 || v >= dim) {
    throw std::invalid_argument("concrete index " + std::to_string(v) + " out of range for D=" +
                                std::to_string(dim));
  }
}

void sort_monomial(Monomial& m) {
  std::sort(m.selectors.begin(), m.selectors.end());
  std::sort(m.atoms.begin(), m.atoms.end());
}

// Enumerates concrete assignments of a list of index slots. A label occurring
// once is free (reported as a selector), a label occurring twice is summed.
template <class Emit>
void for_each_assignment(int dim, std::span<const IndexLabel> slots, Emit&& emit) {
  std::vector<std::string> names;
  std::vector<int> counts;
  std::vector<int> slot_name(slots.size(), -1);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const IndexLabel& s = slots[i];
    if (s.is_concrete()) {
      check_concrete(dim, s.value);
      continue;
    }
    if (s.name.empty()) throw std::invalid_argument("symbolic index label without a name");
    auto it = std::find(names.begin(), names.end(), s.name);
    int k = static_cast<int>(it - names.begin());
    if (it == names.end()) {
      names.push_back(s.name);
      counts.push_back(0);
    }
    counts[k] += 1;
    if (counts[k] > 2) throw std::invalid_argument("index label '" + s.name + "' appears more than twice");
    slot_name[i] = k;
  }
  std::vector<int> values(names.size(), 0);
  std::vector<int> slot_values(slots.size());
  while (true) {
    Selectors sel;
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (counts[k] == 1) sel.emplace_back(names[k], values[k]);
    }
    std::sort(sel.begin(), sel.end());
    for (std::size_t i = 0; i < slots.size(); ++i) {
      slot_values[i] = slot_name[i] < 0 ? slots[i].value : values[slot_name[i]];
    }
    emit(slot_values, sel);
    std::size_t k = 0;
    while (k < values.size()) {
      if (++values[k] < dim) break;
      values[k] = 0;
      ++k;
    }
    if (k == values.size()) break;
  }
}

std::vector<std::string> free_names_of(int dim, std::span<const IndexLabel> slots) {
  std::vector<std::string> out;
  std::vector<std::string> seen;
  for (const auto& s : slots) {
    if (s.is_concrete()) continue;
    if (std::find(seen.begin(), seen.end(), s.name) != seen.end()) {
      out.erase(std::remove(out.begin(), out.end(), s.name), out.end());
    } else {
      seen.push_back(s.name);
      out.push_back(s.name);
    }
  }
  (void)dim;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> sorted_union(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// d/dx^c of every term of e, accumulated into out with extra selector (optional).
void differentiate_into(const Expr& e, int c, const std::pair<std::string, int>* extra, Expr& out) {
  for (const auto& [m, coef] : e.terms()) {
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
      const Atom& a = m.atoms[i];
      if (i > 0 && m.atoms[i - 1] == a) {
        // identical atom already handled; multiplicity accounted below
        continue;
      }
      std::size_t mult = 1;
      while (i + mult < m.atoms.size() && m.atoms[i + mult] == a) ++mult;
      Monomial n = m;
      if (a.is_coord()) {
        if (a.indices[0] != c) continue;
        n.atoms.erase(n.atoms.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        n.atoms[i].indices.insert(n.atoms[i].indices.begin(), c);
      }
      if (extra != nullptr) n.selectors.push_back(*extra);
      out.add_term(std::move(n), coef * ExactComplex(static_cast<long>(mult)));
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr construction

Expr::Expr(int dim, std::vector<std::string> free_labels) : dim_(dim), free_(std::move(free_labels)) {
  if (dim_ < 1) throw std::invalid_argument("Expr: dimension must be >= 1");
  std::sort(free_.begin(), free_.end());
  if (std::adjacent_find(free_.begin(), free_.end()) != free_.end()) {
    throw std::invalid_argument("Expr: duplicate free label");
  }
}

Expr Expr::constant(int dim, const ExactComplex& c, int mass_power) {
  Expr e(dim);
  Monomial m;
  m.mass_power = mass_power;
  e.add_term(std::move(m), c);
  return e;
}

Expr Expr::field(int dim, const std::string& name, std::span<const IndexLabel> multi_index) {
  if (name.empty()) throw std::invalid_argument("Expr::field: empty field name");
  Expr e(dim, free_names_of(dim, multi_index));
  for_each_assignment(dim, multi_index, [&](const std::vector<int>& vals, const Selectors& sel) {
    Monomial m;
    m.selectors = sel;
    m.atoms.push_back(Atom::deriv(name, vals));
    e.add_term(std::move(m), 1);
  });
  return e;
}

Expr Expr::coord(int dim, const IndexLabel& index) {
  std::vector<IndexLabel> slots{index};
  Expr e(dim, free_names_of(dim, slots));
  for_each_assignment(dim, slots, [&](const std::vector<int>& vals, const Selectors& sel) {
    Monomial m;
    m.selectors = sel;
    m.atoms.push_back(Atom::coord(vals[0]));
    e.add_term(std::move(m), 1);
  });
  return e;
}

Expr Expr::coord_lower(int dim, const IndexLabel& index) {
  std::vector<IndexLabel> slots{index};
  Expr e(dim, free_names_of(dim, slots));
  for_each_assignment(dim, slots, [&](const std::vector<int>& vals, const Selectors& sel) {
    Monomial m;
    m.selectors = sel;
    m.atoms.push_back(Atom::coord(vals[0]));
    e.add_term(std::move(m), metric_sign(vals[0]));
  });
  return e;
}

Expr Expr::metric(int dim, const IndexLabel& a, const IndexLabel& b) {
  std::vector<IndexLabel> slots{a, b};
  Expr e(dim, free_names_of(dim, slots));
  for_each_assignment(dim, slots, [&](const std::vector<int>& vals, const Selectors& sel) {
    if (vals[0] != vals[1]) return;
    Monomial m;
    m.selectors = sel;
    e.add_term(std::move(m), metric_sign(vals[0]));
  });
  return e;
}

Expr Expr::delta(int dim, const IndexLabel& a, const IndexLabel& b) {
  std::vector<IndexLabel> slots{a, b};
  Expr e(dim, free_names_of(dim, slots));
  for_each_assignment(dim, slots, [&](const std::vector<int>& vals, const Selectors& sel) {
    if (vals[0] != vals[1]) return;
    Monomial m;
    m.selectors = sel;
    e.add_term(std::move(m), 1);
  });
  return e;
}

Expr Expr::selector(int dim, const std::string& label, int value) {
  check_concrete(dim, value);
  Expr e(dim, {label});
  Monomial m;
  m.selectors.emplace_back(label, value);
  e.add_term(std::move(m), 1);
  return e;
}

Expr Expr::from_terms(int dim, std::vector<std::string> free_labels,
                      const std::vector<std::pair<Monomial, ExactComplex>>& raw) {
  Expr e(dim, std::move(free_labels));
  for (const auto& [m, c] : raw) e.add_term(m, c);
  return e;
}

void Expr::check_signature(const Monomial& m) const {
  if (m.selectors.size() != free_.size()) {
    throw std::invalid_argument("Expr: term free labels do not match the expression signature");
  }
  for (std::size_t k = 0; k < free_.size(); ++k) {
    if (m.selectors[k].first != free_[k]) {
      throw std::invalid_argument("Expr: term free label '" + m.selectors[k].first +
                                  "' not in the expression signature");
    }
    check_concrete(dim_, m.selectors[k].second);
  }
  for (const auto& a : m.atoms) {
    if (a.is_coord()) {
      if (a.indices.size() != 1) throw std::invalid_argument("Expr: malformed coordinate atom");
    } else if (a.field.empty()) {
      throw std::invalid_argument("Expr: field atom without a name");
    }
    for (int v : a.indices) check_concrete(dim_, v);
  }
}

void Expr::add_term(Monomial m, const ExactComplex& c) {
  if (c.is_zero()) return;
  sort_monomial(m);
  check_signature(m);
  auto [it, inserted] = terms_.try_emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Expr& Expr::operator+=(const Expr& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("Expr: dimension mismatch in sum");
  if (o.free_ != free_) {
    if (o.terms_.empty()) return *this;
    if (!terms_.empty()) {
      throw std::invalid_argument("Expr: free-index signature mismatch in sum");
    }
    free_ = o.free_;
  }
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Expr& Expr::operator-=(const Expr& o) { return *this += -o; }

Expr& Expr::operator*=(const ExactComplex& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Expr Expr::operator-() const {
  Expr r = *this;
  for (auto& [m, v] : r.terms_) v = -v;
  return r;
}

Expr Expr::times_mass(int power) const {
  Expr r(dim_, free_);
  for (const auto& [m, c] : terms_) {
    Monomial n = m;
    n.mass_power += power;
    r.add_term(std::move(n), c);
  }
  return r;
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("Expr: dimension mismatch in product");
  std::vector<std::string> shared;
  std::vector<std::string> result_free;
  std::set_intersection(a.free_.begin(), a.free_.end(), b.free_.begin(), b.free_.end(),
                        std::back_inserter(shared));
  std::set_symmetric_difference(a.free_.begin(), a.free_.end(), b.free_.begin(), b.free_.end(),
                                std::back_inserter(result_free));
  Expr r(a.dim_, result_free);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial n;
      bool keep = true;
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < ma.selectors.size() || j < mb.selectors.size()) {
        if (j == mb.selectors.size() ||
            (i < ma.selectors.size() && ma.selectors[i].first < mb.selectors[j].first)) {
          n.selectors.push_back(ma.selectors[i++]);
        } else if (i == ma.selectors.size() || mb.selectors[j].first < ma.selectors[i].first) {
          n.selectors.push_back(mb.selectors[j++]);
        } else {
          if (ma.selectors[i].second != mb.selectors[j].second) {
            keep = false;
            break;
          }
          ++i;
          ++j;
        }
      }
      if (!keep) continue;
      n.mass_power = ma.mass_power + mb.mass_power;
      n.atoms.reserve(ma.atoms.size() + mb.atoms.size());
      std::merge(ma.atoms.begin(), ma.atoms.end(), mb.atoms.begin(), mb.atoms.end(),
                 std::back_inserter(n.atoms));
      r.add_term(std::move(n), ca * cb);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Calculus

Expr total_derivative(const Expr& e, const IndexLabel& sigma) {
  if (sigma.is_concrete()) {
    check_concrete(e.dim(), sigma.value);
    Expr out(e.dim(), e.free_labels());
    differentiate_into(e, sigma.value, nullptr, out);
    return out;
  }
  if (contains(e.free_labels(), sigma.name)) {
    throw std::invalid_argument("total_derivative: label '" + sigma.name + "' is already used in the expression");
  }
  Expr out(e.dim(), sorted_union(e.free_labels(), {sigma.name}));
  for (int c = 0; c < e.dim(); ++c) {
    std::pair<std::string, int> sel{sigma.name, c};
    differentiate_into(e, c, &sel, out);
  }
  return out;
}

Expr partial_wrt(const Expr& e, const Atom& atom) {
  Expr out(e.dim(), e.free_labels());
  for (const auto& [m, coef] : e.terms()) {
    auto range = std::equal_range(m.atoms.begin(), m.atoms.end(), atom);
    auto mult = range.second - range.first;
    if (mult == 0) continue;
    Monomial n = m;
    n.atoms.erase(n.atoms.begin() + (range.first - m.atoms.begin()));
    out.add_term(std::move(n), coef * ExactComplex(static_cast<long>(mult)));
  }
  return out;
}

Expr deriv_wrt_atom(const Expr& e, const std::string& field, std::span<const IndexLabel> pattern) {
  std::vector<std::string> new_free;
  for (const auto& p : pattern) {
    if (p.is_concrete()) {
      check_concrete(e.dim(), p.value);
      continue;
    }
    if (contains(e.free_labels(), p.name) || contains(new_free, p.name)) {
      throw std::invalid_argument("deriv_wrt_atom: pattern label '" + p.name + "' is not fresh");
    }
    new_free.push_back(p.name);
  }
  const std::size_t order = pattern.size();
  Expr out(e.dim(), sorted_union(e.free_labels(), new_free));
  for (const auto& [m, coef] : e.terms()) {
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
      const Atom& a = m.atoms[i];
      if (a.is_coord() || a.field != field || a.indices.size() != order) continue;
      if (i > 0 && m.atoms[i - 1] == a) continue;
      std::size_t mult = 1;
      while (i + mult < m.atoms.size() && m.atoms[i + mult] == a) ++mult;
      Monomial n = m;
      bool match = true;
      for (std::size_t k = 0; k < order; ++k) {
        if (pattern[k].is_concrete()) {
          if (pattern[k].value != a.indices[k]) match = false;
        } else {
          n.selectors.emplace_back(pattern[k].name, a.indices[k]);
        }
      }
      if (!match) continue;
      n.atoms.erase(n.atoms.begin() + static_cast<std::ptrdiff_t>(i));
      out.add_term(std::move(n), coef * ExactComplex(static_cast<long>(mult)));
    }
  }
  return out;
}

Expr divergence(const Expr& e, const std::string& label) {
  if (!contains(e.free_labels(), label)) {
    throw std::invalid_argument("divergence: '" + label + "' is not a free label");
  }
  std::vector<std::string> rest = e.free_labels();
  rest.erase(std::remove(rest.begin(), rest.end(), label), rest.end());
  std::vector<Expr> slices(e.dim(), Expr(e.dim(), rest));
  for (const auto& [m, coef] : e.terms()) {
    Monomial n = m;
    auto it = std::find_if(n.selectors.begin(), n.selectors.end(),
                           [&](const auto& s) { return s.first == label; });
    int c = it->second;
    n.selectors.erase(it);
    slices[c].add_term(std::move(n), coef);
  }
  Expr out(e.dim(), rest);
  for (int c = 0; c < e.dim(); ++c) differentiate_into(slices[c], c, nullptr, out);
  return out;
}

// ---------------------------------------------------------------------------
// Index manipulation

Expr canonicalize(const Expr& e) {
  std::vector<std::pair<Monomial, ExactComplex>> raw(e.terms().begin(), e.terms().end());
  return Expr::from_terms(e.dim(), e.free_labels(), raw);
}

Expr contract(const Expr& e, const std::string& a, const std::string& b) {
  if (a == b || !contains(e.free_labels(), a) || !contains(e.free_labels(), b)) {
    throw std::invalid_argument("contract: labels must be two distinct free labels");
  }
  std::vector<std::string> rest;
  for (const auto& f : e.free_labels()) {
    if (f != a && f != b) rest.push_back(f);
  }
  Expr out(e.dim(), rest);
  for (const auto& [m, coef] : e.terms()) {
    int va = -1;
    int vb = -1;
    Monomial n = m;
    n.selectors.clear();
    for (const auto& s : m.selectors) {
      if (s.first == a) {
        va = s.second;
      } else if (s.first == b) {
        vb = s.second;
      } else {
        n.selectors.push_back(s);
      }
    }
    if (va == vb) out.add_term(std::move(n), coef);
  }
  return out;
}

Expr restrict_label(const Expr& e, const std::string& label, const std::set<int>& values) {
  if (!contains(e.free_labels(), label)) {
    throw std::invalid_argument("restrict_label: '" + label + "' is not a free label");
  }
  Expr out(e.dim(), e.free_labels());
  for (const auto& [m, coef] : e.terms()) {
    for (const auto& s : m.selectors) {
      if (s.first == label && values.count(s.second) != 0) out.add_term(m, coef);
    }
  }
  return out;
}

Expr rename_label(const Expr& e, const std::string& from, const std::string& to) {
  if (from == to) return e;
  if (!contains(e.free_labels(), from)) throw std::invalid_argument("rename_label: '" + from + "' is not free");
  if (contains(e.free_labels(), to)) throw std::invalid_argument("rename_label: '" + to + "' already used");
  std::vector<std::string> names = e.free_labels();
  std::replace(names.begin(), names.end(), from, to);
  Expr out(e.dim(), names);
  for (const auto& [m, coef] : e.terms()) {
    Monomial n = m;
    for (auto& s : n.selectors) {
      if (s.first == from) s.first = to;
    }
    out.add_term(std::move(n), coef);
  }
  return out;
}

Expr component(const Expr& e, const std::map<std::string, int>& values) {
  std::vector<std::string> rest;
  for (const auto& f : e.free_labels()) {
    if (values.count(f) == 0) rest.push_back(f);
  }
  for (const auto& [name, v] : values) {
    if (!contains(e.free_labels(), name)) throw std::invalid_argument("component: '" + name + "' is not free");
  }
  Expr out(e.dim(), rest);
  for (const auto& [m, coef] : e.terms()) {
    Monomial n = m;
    n.selectors.clear();
    bool keep = true;
    for (const auto& s : m.selectors) {
      auto it = values.find(s.first);
      if (it == values.end()) {
        n.selectors.push_back(s);
      } else if (it->second != s.second) {
        keep = false;
      }
    }
    if (keep) out.add_term(std::move(n), coef);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Field manipulation

bool is_conjugate_name(const std::string& field) { return !field.empty() && field.back() == '*'; }

std::string conjugate_name(const std::string& field) {
  return is_conjugate_name(field) ? field.substr(0, field.size() - 1) : field + "*";
}

Expr conj(const Expr& e, const std::set<std::string>& real_fields) {
  Expr out(e.dim(), e.free_labels());
  for (const auto& [m, coef] : e.terms()) {
    Monomial n = m;
    for (auto& a : n.atoms) {
      if (!a.is_coord() && real_fields.count(a.field) == 0) a.field = conjugate_name(a.field);
    }
    out.add_term(std::move(n), coef.conj());
  }
  return out;
}

Expr commute_derivatives(const Expr& e) {
  Expr out(e.dim(), e.free_labels());
  for (const auto& [m, coef] : e.terms()) {
    Monomial n = m;
    for (auto& a : n.atoms) {
      if (!a.is_coord()) std::sort(a.indices.begin(), a.indices.end());
    }
    out.add_term(std::move(n), coef);
  }
  return out;
}

Expr truncate_degree(const Expr& e, const std::set<std::string>& fields, int max_degree) {
  Expr out(e.dim(), e.free_labels());
  for (const auto& [m, coef] : e.terms()) {
    int deg = 0;
    for (const auto& a : m.atoms) {
      if (!a.is_coord() && fields.count(a.field) != 0) ++deg;
    }
    if (deg <= max_degree) out.add_term(m, coef);
  }
  return out;
}

std::set<std::string> fields_of(const Expr& e) {
  std::set<std::string> out;
  for (const auto& [m, coef] : e.terms()) {
    for (const auto& a : m.atoms) {
      if (!a.is_coord()) out.insert(a.field);
    }
  }
  return out;
}

int max_derivative_order(const Expr& e, const std::string& field) {
  int n = -1;
  for (const auto& [m, coef] : e.terms()) {
    for (const auto& a : m.atoms) {
      if (!a.is_coord() && a.field == field) n = std::max(n, a.order());
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Evaluation

Polynomial eval_polynomial(const Expr& e, const EvalContext& ctx) {
  const int dim = e.dim();
  for (const auto& f : e.free_labels()) {
    if (ctx.bindings.count(f) == 0) throw std::invalid_argument("eval_polynomial: unbound free index '" + f + "'");
  }
  std::map<Atom, Polynomial> cache;
  auto atom_poly = [&](const Atom& a) -> const Polynomial& {
    auto it = cache.find(a);
    if (it != cache.end()) return it->second;
    Polynomial p(dim);
    if (a.is_coord()) {
      p = Polynomial::variable(dim, a.indices[0]);
    } else {
      auto f = ctx.fields.find(a.field);
      if (f == ctx.fields.end()) throw std::invalid_argument("eval_polynomial: missing field '" + a.field + "'");
      if (f->second.nvars() != dim) throw std::invalid_argument("eval_polynomial: field polynomial has wrong arity");
      p = f->second;
      // innermost derivative is the last index; order is irrelevant for polynomials
      for (auto k = a.indices.rbegin(); k != a.indices.rend(); ++k) p = p.derivative(*k);
    }
    return cache.emplace(a, std::move(p)).first->second;
  };

  Polynomial result(dim);
  for (const auto& [m, coef] : e.terms()) {
    bool keep = true;
    for (const auto& [name, v] : m.selectors) {
      if (ctx.bindings.at(name) != v) keep = false;
    }
    if (!keep) continue;
    ExactComplex c = coef * ExactComplex(rational_pow(ctx.mass, m.mass_power));
    Polynomial term = Polynomial::constant(dim, c);
    for (const auto& a : m.atoms) {
      term = term * atom_poly(a);
      if (term.is_zero()) break;
    }
    result += term;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json to_json(const Expr& e) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, coef] : e.terms()) {
    nlohmann::json t;
    t["coeff"] = {{"re", coef.re().get_str()}, {"im", coef.im().get_str()}};
    t["m"] = m.mass_power;
    nlohmann::json sel = nlohmann::json::array();
    for (const auto& [name, v] : m.selectors) sel.push_back({name, v});
    t["sel"] = sel;
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : m.atoms) {
      if (a.is_coord()) {
        atoms.push_back({{"x", a.indices[0]}});
      } else {
        atoms.push_back({{"field", a.field}, {"d", a.indices}});
      }
    }
    t["atoms"] = atoms;
    terms.push_back(t);
  }
  return {{"dim", e.dim()}, {"free", e.free_labels()}, {"terms", terms}};
}

Expr from_json(const nlohmann::json& j) {
  Expr e(j.at("dim").get<int>(), j.at("free").get<std::vector<std::string>>());
  for (const auto& t : j.at("terms")) {
    Monomial m;
    m.mass_power = t.at("m").get<int>();
    for (const auto& s : t.at("sel")) m.selectors.emplace_back(s.at(0).get<std::string>(), s.at(1).get<int>());
    for (const auto& a : t.at("atoms")) {
      if (a.contains("x")) {
        m.atoms.push_back(Atom::coord(a.at("x").get<int>()));
      } else {
        m.atoms.push_back(Atom::deriv(a.at("field").get<std::string>(), a.at("d").get<std::vector<int>>()));
      }
    }
    ExactComplex c(parse_rational(t.at("coeff").at("re").get<std::string>()),
                   parse_rational(t.at("coeff").at("im").get<std::string>()));
    e.add_term(std::move(m), c);
  }
  return e;
}

std::string render_atom(const Atom& a) {
  if (a.is_coord()) return "x^" + std::to_string(a.indices[0]);
  if (a.indices.empty()) return a.field;
  std::string s = "d_";
  bool wide = false;
  for (int v : a.indices) wide = wide || v > 9;
  for (std::size_t k = 0; k < a.indices.size(); ++k) {
    if (wide && k > 0) s += ",";
    s += std::to_string(a.indices[k]);
  }
  return s + " " + a.field;
}

namespace {

std::string render_term(const Monomial& m, const ExactComplex& coef, bool first) {
  std::string body;
  for (const auto& a : m.atoms) {
    if (!body.empty()) body += " ";
    body += a.is_coord() || a.indices.empty() ? render_atom(a) : "(" + render_atom(a) + ")";
  }
  if (m.mass_power != 0) {
    if (!body.empty()) body = " " + body;
    body = (m.mass_power == 1 ? std::string("m") : "m^" + std::to_string(m.mass_power)) + body;
  }
  std::string sign;
  ExactComplex c = coef;
  if (c.is_real() && sgn(c.re()) < 0) {
    sign = "-";
    c = -c;
  } else if (sgn(c.re()) == 0 && sgn(c.im()) < 0) {
    sign = "-";
    c = -c;
  }
  std::string cs;
  if (!(c == ExactComplex(1)) || body.empty()) cs = c.to_string();
  std::string s = cs.empty() ? body : (body.empty() ? cs : cs + " " + body);
  if (first) return sign + s;
  return (sign.empty() ? " + " : " - ") + s;
}

}  // namespace

std::string render(const Expr& e) {
  if (e.is_zero()) return "0";
  std::ostringstream out;
  if (e.free_labels().empty()) {
    bool first = true;
    for (const auto& [m, coef] : e.terms()) {
      out << render_term(m, coef, first);
      first = false;
    }
    return out.str();
  }
  // group terms by their selector assignment
  std::map<Selectors, std::vector<std::pair<const Monomial*, const ExactComplex*>>> groups;
  for (const auto& [m, coef] : e.terms()) groups[m.selectors].emplace_back(&m, &coef);
  bool first_group = true;
  for (const auto& [sel, items] : groups) {
    if (!first_group) out << "\n";
    first_group = false;
    out << "[";
    for (std::size_t k = 0; k < sel.size(); ++k) {
      if (k > 0) out << ",";
      out << sel[k].first << "=" << sel[k].second;
    }
    out << "] ";
    bool first = true;
    for (const auto& [m, c] : items) {
      out << render_term(*m, *c, first);
      first = false;
    }
  }
  return out.str();
}

}  // namespace noether
