#pragma once

// The charged scalar with Hamiltonian sqrt(-lap + m^2): dispersion series,
// two-sided kernel, momentum-space currents and the symbolic truncated model.
//
// Symbolic objects keep m as a formal symbol (Monomial::mass_power); numeric
// routines take m as a double.

#include <string>
#include <vector>

#include "noether/exact.hpp"
#include "noether/tensor_expr.hpp"
#include "noether/variational.hpp"

namespace noether {

/// f_l(m) = value * m^mass_power.
struct SeriesCoefficient {
  Rational value;
  int mass_power = 1;

  double evaluate(double m) const;
};

/// Coefficient of x^l in sqrt(m^2 - x), from the ratio f_{l+1}/f_l = (2l-1)/(2(l+1)) / m^2.
SeriesCoefficient series_coeff(int l);
std::vector<SeriesCoefficient> series_table(int max_l);

/// sum_{l<=L} f_l(m) x^l. Converges to sqrt(m^2 - x) only for |x| < m^2.
double truncated_sqrt(double m, double x, int L);

/// |truncated_sqrt(m, x, L) - sqrt(m^2 - x)| evaluated in 512-bit arithmetic,
/// so that errors far below double rounding stay measurable.
double truncation_error(double m, double x, int L);

/// sum_{l=1}^{L} f_l sum_{k=1}^{l} x^{k-1} y^{l-k}.
double two_sided_kernel(double m, double x, double y, int L);
/// -1 / (sqrt(m^2 - x) + sqrt(m^2 - y)).
double two_sided_kernel_closed(double m, double x, double y);

// ---------------------------------------------------------------------------
// Momentum space. Upper-index components, metric diag(+1,-1,...).

struct FourMomentum {
  double p0 = 0.0;
  std::vector<double> p;
  bool on_shell = false;

  static FourMomentum make_on_shell(double m, std::vector<double> spatial);
  static FourMomentum make_off_shell(double p0, std::vector<double> spatial);

  bool satisfies_shell(double m, double tol = 1e-12) const;
};

double dispersion(double m, const std::vector<double>& p);

/// (1, (p'+p)/(E(p')+E(p))), energies on-shell.
std::vector<double> current_momentum(double m, const std::vector<double>& p_out, const std::vector<double>& p_in);

/// T[sigma][mu] = J^sigma * (p'+p)_mu / 2 with (p'+p)_0 = E'+E.
std::vector<std::vector<double>> emt_momentum(double m, const std::vector<double>& p_out,
                                              const std::vector<double>& p_in);

/// (p'-p)_sigma J^sigma - [G^{-1}(p') - G^{-1}(p)] with G^{-1}(p) = p^0 - E(p). Zero off-shell.
double ward_defect(double m, const FourMomentum& p_out, const FourMomentum& p_in);

/// Exact d=1 version; m^2 + p^2 must be perfect rational squares for both momenta.
Rational ward_defect_exact(const Rational& m, const Rational& p_out, const Rational& p_in, const Rational& p0_out,
                           const Rational& p0_in);

/// (p'+p)^sigma / sqrt(2E' 2E).
std::vector<double> alternative_covariant_current(double m, const std::vector<double>& p_out,
                                                  const std::vector<double>& p_in);

// ---------------------------------------------------------------------------
// Symbolic truncations.

/// Largest order accepted without `allow_large` (term count grows like d^l).
inline constexpr int kMaxSymbolicOrder = 4;

/// 1/2 (phi* i d_t phi - sum_{l<=order} f_l phi* lap^l phi) + c.c. in dimension dim.
/// lap^l carries the multi-index (a1,a1,a2,a2,...,al,al) summed over spatial values.
LagrangianSpec truncated_model_lagrangian(int order, int dim, bool allow_large = false);

/// Series forms of the spatial currents built term by term from the delta-chain
/// expressions, independently of the Noether constructor. sigma runs over spatial values.
Expr series_vector_current(int order, int dim, const std::string& sigma = "sigma");
Expr series_energy_momentum(int order, int dim, const std::string& sigma = "sigma", const std::string& mu = "mu");
/// Spatial pairs (a, b) only.
Expr series_angular_momentum(int order, int dim, const std::string& sigma = "sigma", const std::string& a = "mu",
                             const std::string& b = "nu");

/// Name of the real gauge-field component A^sigma used by the gauged model.
std::string gauge_field_name(int sigma);

/// The minimally coupled truncated Lagrangian, with (p - A)^{2l} expanded in literal
/// operator order and kept to linear order in A.
LagrangianSpec gauged_model_lagrangian(int order, int dim);

/// -delta S / delta A_sigma at A = 0 for the gauged truncated model (order <= 2 unless allow_large).
Expr gauged_functional_derivative(int order, int dim, int sigma, bool allow_large = false);

}  // namespace noether
