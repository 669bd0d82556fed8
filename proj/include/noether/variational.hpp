#pragma once

#include <map>
#include <string>
#include <vector>

#include "noether/dsl.hpp"
#include "noether/tensor_expr.hpp"

namespace noether {

struct LagrangianSpec {
  Expr expr{4};
  std::vector<std::string> fields;
  std::set<std::string> real_fields;
  int max_order = 0;

  /// Validates that expr is index-free and only uses declared fields.
  static LagrangianSpec make(Expr expr, std::vector<std::string> fields, std::set<std::string> real_fields = {});
  static LagrangianSpec from_source(const LagrangianSource& src);

  int dim() const { return expr.dim(); }
};

/// One-parameter symmetry generator. The variation it produces is the
/// coefficient of the infinitesimal parameter (omega^a, b^mu, or eps^{mu nu}/2).
struct SymmetryVariation {
  enum class Kind { internal, translation, rotation };

  Kind kind = Kind::internal;
  // internal: generator t acting on the listed complex components; phi* gets conj(t).
  std::vector<std::string> components;
  std::vector<std::vector<ExactComplex>> generator;
  // translation: direction mu; rotation: pair (mu, nu). Free labels by default.
  IndexLabel mu = IndexLabel::free("mu");
  IndexLabel nu = IndexLabel::free("nu");
  // rotation pairs involving the time axis are only produced when set.
  bool include_boosts = false;

  static SymmetryVariation u1(std::vector<std::string> complex_components);
  static SymmetryVariation internal(std::vector<std::string> complex_components,
                                    std::vector<std::vector<ExactComplex>> generator);
  static SymmetryVariation translation(IndexLabel mu = IndexLabel::free("mu"));
  static SymmetryVariation rotation(IndexLabel mu = IndexLabel::free("mu"), IndexLabel nu = IndexLabel::free("nu"),
                                    bool include_boosts = false);

  /// False for rotation currents that include boost pairs (not covered by the checks).
  bool validated() const { return kind != Kind::rotation || !include_boosts; }
  std::vector<std::string> extra_labels() const;
};

/// Generalized Euler-Lagrange expression dL/dPsi + sum_n (-1)^n d_{mn}..d_{m1} dL/d(d_{m1..mn} Psi).
Expr euler_lagrange(const LagrangianSpec& L, const std::string& field);

/// delta Psi per declared field as in the field-variation formula:
/// internal -> -i T Psi, translation -> -d_mu Psi, rotation -> -i(Lambda_{mu nu}) Psi.
std::map<std::string, Expr> apply_variation(const SymmetryVariation& v, const LagrangianSpec& L);

/// The expression that multiplies the derivative chain inside the current:
/// -i T Psi, +d_mu Psi (energy-momentum sign), or (x_mu d_nu - x_nu d_mu) Psi.
std::map<std::string, Expr> current_generator(const SymmetryVariation& v, const LagrangianSpec& L);

/// Noether current with free label `sigma` (plus mu / mu,nu for spacetime symmetries).
Expr noether_current(const LagrangianSpec& L, const SymmetryVariation& v, const std::string& sigma = "sigma");

/// First-order change of L under the generator minus the change required by the symmetry
/// (0, d_mu L or (x_mu d_nu - x_nu d_mu) L). Zero for an invariant Lagrangian.
Expr invariance_residual(const LagrangianSpec& L, const SymmetryVariation& v);

/// d_sigma J^sigma + sum_fields EL(field) * generator(field). Canonical zero for an
/// invariant Lagrangian; spacetime symmetries are compared modulo commuting derivatives.
Expr divergence_defect(const LagrangianSpec& L, const SymmetryVariation& v, const std::string& sigma = "sigma");

}  // namespace noether
