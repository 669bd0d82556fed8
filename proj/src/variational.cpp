#include "noether/variational.hpp"

#include <algorithm>
#include <stdexcept>

namespace noether {

namespace {

// Distinct atoms of `field` with derivative order >= min_order, in canonical order.
std::vector<Atom> atoms_of(const Expr& e, const std::string& field, int min_order) {
  std::set<Atom> found;
  for (const auto& [m, c] : e.terms()) {
    for (const auto& a : m.atoms) {
      if (!a.is_coord() && a.field == field && a.order() >= min_order) found.insert(a);
    }
  }
  return {found.begin(), found.end()};
}

Expr apply_chain(Expr e, const std::vector<int>& indices_innermost_first) {
  for (int c : indices_innermost_first) e = total_derivative(e, IndexLabel::concrete(c));
  return e;
}

std::set<int> spatial_values(int dim) {
  std::set<int> s;
  for (int c = 1; c < dim; ++c) s.insert(c);
  return s;
}

Expr restrict_rotation(Expr e, const SymmetryVariation& v) {
  if (v.kind != SymmetryVariation::Kind::rotation || v.include_boosts) return e;
  for (const IndexLabel* l : {&v.mu, &v.nu}) {
    if (!l->is_concrete()) e = restrict_label(e, l->name, spatial_values(e.dim()));
  }
  return e;
}

void check_rotation_pair(const SymmetryVariation& v) {
  if (v.include_boosts) return;
  for (const IndexLabel* l : {&v.mu, &v.nu}) {
    if (l->is_concrete() && l->value == 0) {
      throw std::invalid_argument("rotation pair involves the time axis; set include_boosts to allow boosts");
    }
  }
}

bool is_spacetime(const SymmetryVariation& v) { return v.kind != SymmetryVariation::Kind::internal; }

}  // namespace

// ---------------------------------------------------------------------------

LagrangianSpec LagrangianSpec::make(Expr expr, std::vector<std::string> fields, std::set<std::string> real_fields) {
  if (!expr.free_labels().empty()) throw std::invalid_argument("Lagrangian must be a scalar (no free indices)");
  for (const auto& f : fields_of(expr)) {
    if (std::find(fields.begin(), fields.end(), f) == fields.end()) {
      throw std::invalid_argument("Lagrangian uses undeclared field '" + f + "'");
    }
  }
  LagrangianSpec L;
  L.max_order = 0;
  for (const auto& f : fields) L.max_order = std::max(L.max_order, max_derivative_order(expr, f));
  L.expr = std::move(expr);
  L.fields = std::move(fields);
  L.real_fields = std::move(real_fields);
  return L;
}

LagrangianSpec LagrangianSpec::from_source(const LagrangianSource& src) {
  return make(src.lagrangian, src.fields, src.real_fields);
}

SymmetryVariation SymmetryVariation::u1(std::vector<std::string> complex_components) {
  std::size_t n = complex_components.size();
  std::vector<std::vector<ExactComplex>> t(n, std::vector<ExactComplex>(n, ExactComplex(0)));
  for (std::size_t k = 0; k < n; ++k) t[k][k] = 1;
  return internal(std::move(complex_components), std::move(t));
}

SymmetryVariation SymmetryVariation::internal(std::vector<std::string> complex_components,
                                              std::vector<std::vector<ExactComplex>> generator) {
  if (generator.size() != complex_components.size()) throw std::invalid_argument("generator size mismatch");
  for (const auto& row : generator) {
    if (row.size() != complex_components.size()) throw std::invalid_argument("generator must be square");
  }
  SymmetryVariation v;
  v.kind = Kind::internal;
  v.components = std::move(complex_components);
  v.generator = std::move(generator);
  return v;
}

SymmetryVariation SymmetryVariation::translation(IndexLabel mu) {
  SymmetryVariation v;
  v.kind = Kind::translation;
  v.mu = std::move(mu);
  return v;
}

SymmetryVariation SymmetryVariation::rotation(IndexLabel mu, IndexLabel nu, bool include_boosts) {
  if (!mu.is_concrete() && !nu.is_concrete() && mu.name == nu.name) {
    throw std::invalid_argument("rotation labels must differ");
  }
  SymmetryVariation v;
  v.kind = Kind::rotation;
  v.mu = std::move(mu);
  v.nu = std::move(nu);
  v.include_boosts = include_boosts;
  return v;
}

std::vector<std::string> SymmetryVariation::extra_labels() const {
  std::vector<std::string> out;
  if (kind == Kind::translation && !mu.is_concrete()) out.push_back(mu.name);
  if (kind == Kind::rotation) {
    if (!mu.is_concrete()) out.push_back(mu.name);
    if (!nu.is_concrete()) out.push_back(nu.name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

Expr euler_lagrange(const LagrangianSpec& L, const std::string& field) {
  Expr out = partial_wrt(L.expr, Atom::deriv(field));
  for (const auto& atom : atoms_of(L.expr, field, 1)) {
    // d_{mu_n} ... d_{mu_1} applied to the partial: mu_1 acts first.
    Expr term = apply_chain(partial_wrt(L.expr, atom), atom.indices);
    if (atom.order() % 2 == 1) term = -term;
    out += term;
  }
  return out;
}

std::map<std::string, Expr> current_generator(const SymmetryVariation& v, const LagrangianSpec& L) {
  const int dim = L.dim();
  std::map<std::string, Expr> out;
  switch (v.kind) {
    case SymmetryVariation::Kind::internal: {
      const auto& comps = v.components;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        Expr dphi(dim);
        Expr dphic(dim);
        for (std::size_t j = 0; j < comps.size(); ++j) {
          const ExactComplex& t = v.generator[i][j];
          if (t.is_zero()) continue;
          dphi += Expr::field(dim, comps[j]) * (-ExactComplex::i() * t);
          dphic += Expr::field(dim, conjugate_name(comps[j])) * (ExactComplex::i() * t.conj());
        }
        out.emplace(comps[i], dphi);
        out.emplace(conjugate_name(comps[i]), dphic);
      }
      break;
    }
    case SymmetryVariation::Kind::translation:
      for (const auto& f : L.fields) out.emplace(f, Expr::field(dim, f, {v.mu}));
      break;
    case SymmetryVariation::Kind::rotation: {
      check_rotation_pair(v);
      for (const auto& f : L.fields) {
        Expr g = Expr::coord_lower(dim, v.mu) * Expr::field(dim, f, {v.nu}) -
                 Expr::coord_lower(dim, v.nu) * Expr::field(dim, f, {v.mu});
        out.emplace(f, restrict_rotation(g, v));
      }
      break;
    }
  }
  return out;
}

std::map<std::string, Expr> apply_variation(const SymmetryVariation& v, const LagrangianSpec& L) {
  auto out = current_generator(v, L);
  if (v.kind == SymmetryVariation::Kind::translation) {
    for (auto& [f, e] : out) e = -e;
  }
  return out;
}

Expr noether_current(const LagrangianSpec& L, const SymmetryVariation& v, const std::string& sigma) {
  const int dim = L.dim();
  std::vector<std::string> extra = v.extra_labels();
  if (std::find(extra.begin(), extra.end(), sigma) != extra.end()) {
    throw std::invalid_argument("current label '" + sigma + "' collides with a symmetry label");
  }
  std::vector<std::string> signature = extra;
  signature.push_back(sigma);
  Expr current(dim, signature);

  const auto gens = current_generator(v, L);
  for (const auto& [field, gen] : gens) {
    for (const auto& atom : atoms_of(L.expr, field, 1)) {
      const std::vector<int>& mu = atom.indices;
      const int n = atom.order();
      // suffix[k] = d_{mu_{k+1}} ... d_{mu_n} gen  (mu_n acts first), k = 0..n
      std::vector<Expr> suffix(n + 1, Expr(dim));
      suffix[n] = gen;
      for (int k = n - 1; k >= 0; --k) suffix[k] = total_derivative(suffix[k + 1], IndexLabel::concrete(mu[k]));
      Expr prefix = partial_wrt(L.expr, atom);  // d_{mu_{k-1}} ... d_{mu_1} P, grows with k
      for (int k = 1; k <= n; ++k) {
        if (k > 1) prefix = total_derivative(prefix, IndexLabel::concrete(mu[k - 2]));
        Expr term = Expr::selector(dim, sigma, mu[k - 1]) * prefix * suffix[k];
        if (k % 2 == 0) term = -term;
        current += term;
      }
    }
  }

  switch (v.kind) {
    case SymmetryVariation::Kind::internal:
      break;
    case SymmetryVariation::Kind::translation:
      current -= Expr::delta(dim, IndexLabel::free(sigma), v.mu) * L.expr;
      break;
    case SymmetryVariation::Kind::rotation: {
      IndexLabel s = IndexLabel::free(sigma);
      Expr orbital = Expr::coord_lower(dim, v.mu) * Expr::delta(dim, s, v.nu) -
                     Expr::coord_lower(dim, v.nu) * Expr::delta(dim, s, v.mu);
      current -= orbital * L.expr;
      break;
    }
  }
  return restrict_rotation(current, v);
}

Expr invariance_residual(const LagrangianSpec& L, const SymmetryVariation& v) {
  const int dim = L.dim();
  const auto gens = current_generator(v, L);
  Expr change(dim, v.extra_labels());
  for (const auto& [field, gen] : gens) {
    for (const auto& atom : atoms_of(L.expr, field, 0)) {
      std::vector<int> innermost_first(atom.indices.rbegin(), atom.indices.rend());
      change += partial_wrt(L.expr, atom) * apply_chain(gen, innermost_first);
    }
  }
  Expr required(dim, v.extra_labels());
  switch (v.kind) {
    case SymmetryVariation::Kind::internal:
      break;
    case SymmetryVariation::Kind::translation:
      if (v.mu.is_concrete()) {
        required = total_derivative(L.expr, v.mu);
      } else {
        required = total_derivative(L.expr, v.mu);
      }
      break;
    case SymmetryVariation::Kind::rotation:
      required = Expr::coord_lower(dim, v.mu) * total_derivative(L.expr, v.nu) -
                 Expr::coord_lower(dim, v.nu) * total_derivative(L.expr, v.mu);
      required = restrict_rotation(required, v);
      break;
  }
  Expr residual = change - required;
  return is_spacetime(v) ? commute_derivatives(residual) : residual;
}

Expr divergence_defect(const LagrangianSpec& L, const SymmetryVariation& v, const std::string& sigma) {
  Expr defect = divergence(noether_current(L, v, sigma), sigma);
  for (const auto& [field, gen] : current_generator(v, L)) defect += euler_lagrange(L, field) * gen;
  return is_spacetime(v) ? commute_derivatives(defect) : defect;
}

}  // namespace noether
