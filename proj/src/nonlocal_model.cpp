#include "noether/nonlocal_model.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace noether {

namespace {

constexpr int kHighPrecisionBits = 512;

const std::string kPhi = "phi";
const std::string kPhiBar = "phi*";

// Scaled coefficients c_l = f_l / m^{1-2l} as doubles.
std::vector<double> scaled_coefficients(int L) {
  std::vector<double> c(static_cast<std::size_t>(L) + 1);
  c[0] = 1.0;
  for (int l = 0; l < L; ++l) c[l + 1] = c[l] * (2.0 * l - 1.0) / (2.0 * (l + 1));
  return c;
}

void check_dims(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("momenta must share a nonzero spatial dimension");
}

// Every multi-index (a1,a1,a2,a2,...,al,al) with a_j in 1..d.
template <class Visit>
void for_each_paired_index(int l, int dim, Visit&& visit) {
  const int d = dim - 1;
  std::vector<int> a(static_cast<std::size_t>(l), 1);
  std::vector<int> alpha(2 * static_cast<std::size_t>(l));
  while (true) {
    for (int j = 0; j < l; ++j) alpha[2 * j] = alpha[2 * j + 1] = a[j];
    visit(alpha);
    int j = l - 1;
    while (j >= 0 && a[j] == d) a[j--] = 1;
    if (j < 0) return;
    ++a[j];
  }
}

void check_order(int order, int limit, bool allow_large, const char* what) {
  if (order < 0) throw std::invalid_argument(std::string(what) + ": order must be non-negative");
  if (order > limit && !allow_large) {
    throw std::invalid_argument(std::string(what) + ": order " + std::to_string(order) + " exceeds the size guard " +
                                std::to_string(limit) + " (pass allow_large to override)");
  }
}

void check_dim(int dim) {
  if (dim < 2 || dim > 4) throw std::invalid_argument("dimension must be 2, 3 or 4");
}

Atom phibar_with_reversed(const std::vector<int>& alpha, int count) {
  std::vector<int> idx(alpha.rend() - count, alpha.rend());
  return Atom::deriv(kPhiBar, std::move(idx));
}

ExactComplex coefficient_of(const SeriesCoefficient& f, const ExactComplex& factor) {
  return ExactComplex(f.value) * factor;
}

}  // namespace

// ---------------------------------------------------------------------------

double SeriesCoefficient::evaluate(double m) const { return value.get_d() * std::pow(m, mass_power); }

SeriesCoefficient series_coeff(int l) {
  if (l < 0) throw std::invalid_argument("series index must be non-negative");
  SeriesCoefficient f{Rational(1), 1};
  for (int j = 0; j < l; ++j) {
    f.value *= Rational(2 * j - 1, 2 * (j + 1));
    f.value.canonicalize();
    f.mass_power -= 2;
  }
  return f;
}

std::vector<SeriesCoefficient> series_table(int max_l) {
  std::vector<SeriesCoefficient> out;
  SeriesCoefficient f{Rational(1), 1};
  for (int l = 0; l <= max_l; ++l) {
    out.push_back(f);
    f.value *= Rational(2 * l - 1, 2 * (l + 1));
    f.value.canonicalize();
    f.mass_power -= 2;
  }
  return out;
}

double truncated_sqrt(double m, double x, int L) {
  if (m <= 0) throw std::invalid_argument("mass must be positive");
  const auto c = scaled_coefficients(L);
  const double u = x / (m * m);
  double sum = 0.0;
  for (int l = L; l >= 0; --l) sum = sum * u + c[l];
  return m * sum;
}

double truncation_error(double m, double x, int L) {
  if (m <= 0) throw std::invalid_argument("mass must be positive");
  mpf_class mm(m, kHighPrecisionBits);
  mpf_class xx(x, kHighPrecisionBits);
  mpf_class u(xx / (mm * mm), kHighPrecisionBits);
  mpf_class term(1, kHighPrecisionBits);
  mpf_class power(1, kHighPrecisionBits);
  mpf_class sum(0, kHighPrecisionBits);
  for (int l = 0; l <= L; ++l) {
    sum += term * power;
    term *= mpf_class(2.0 * l - 1.0, kHighPrecisionBits);
    term /= mpf_class(2.0 * (l + 1), kHighPrecisionBits);
    power *= u;
  }
  mpf_class exact(mm * mm - xx, kHighPrecisionBits);
  if (exact < 0) throw std::invalid_argument("truncation_error needs x <= m^2");
  exact = sqrt(exact);
  mpf_class diff(mm * sum - exact, kHighPrecisionBits);
  return std::fabs(diff.get_d());
}

double two_sided_kernel(double m, double x, double y, int L) {
  if (m <= 0) throw std::invalid_argument("mass must be positive");
  const auto c = scaled_coefficients(L);
  const double u = x / (m * m);
  const double v = y / (m * m);
  // S_l = sum_{k=1}^{l} u^{k-1} v^{l-k};  S_{l+1} = u^l + v S_l.
  double S = 1.0;
  double ul = 1.0;
  double sum = 0.0;
  for (int l = 1; l <= L; ++l) {
    sum += c[l] * S;
    ul *= u;
    S = ul + v * S;
  }
  return sum / m;
}

double two_sided_kernel_closed(double m, double x, double y) {
  if (x > m * m || y > m * m) throw std::invalid_argument("closed kernel needs x, y <= m^2");
  return -1.0 / (std::sqrt(m * m - x) + std::sqrt(m * m - y));
}

// ---------------------------------------------------------------------------

double dispersion(double m, const std::vector<double>& p) {
  double s = m * m;
  for (double c : p) s += c * c;
  return std::sqrt(s);
}

FourMomentum FourMomentum::make_on_shell(double m, std::vector<double> spatial) {
  FourMomentum k;
  k.p0 = dispersion(m, spatial);
  k.p = std::move(spatial);
  k.on_shell = true;
  return k;
}

FourMomentum FourMomentum::make_off_shell(double p0, std::vector<double> spatial) {
  FourMomentum k;
  k.p0 = p0;
  k.p = std::move(spatial);
  k.on_shell = false;
  return k;
}

bool FourMomentum::satisfies_shell(double m, double tol) const { return std::fabs(p0 - dispersion(m, p)) <= tol; }

std::vector<double> current_momentum(double m, const std::vector<double>& p_out, const std::vector<double>& p_in) {
  check_dims(p_out, p_in);
  const double denom = dispersion(m, p_out) + dispersion(m, p_in);
  std::vector<double> J(p_out.size() + 1);
  J[0] = 1.0;
  for (std::size_t a = 0; a < p_out.size(); ++a) J[a + 1] = (p_out[a] + p_in[a]) / denom;
  return J;
}

std::vector<std::vector<double>> emt_momentum(double m, const std::vector<double>& p_out,
                                              const std::vector<double>& p_in) {
  const auto J = current_momentum(m, p_out, p_in);
  std::vector<double> half_sum_lower(J.size());
  half_sum_lower[0] = 0.5 * (dispersion(m, p_out) + dispersion(m, p_in));
  for (std::size_t a = 0; a < p_out.size(); ++a) half_sum_lower[a + 1] = -0.5 * (p_out[a] + p_in[a]);
  std::vector<std::vector<double>> T(J.size(), std::vector<double>(J.size()));
  for (std::size_t s = 0; s < J.size(); ++s) {
    for (std::size_t mu = 0; mu < J.size(); ++mu) T[s][mu] = J[s] * half_sum_lower[mu];
  }
  return T;
}

double ward_defect(double m, const FourMomentum& p_out, const FourMomentum& p_in) {
  const auto J = current_momentum(m, p_out.p, p_in.p);
  double contraction = (p_out.p0 - p_in.p0) * J[0];
  for (std::size_t a = 0; a < p_out.p.size(); ++a) contraction -= (p_out.p[a] - p_in.p[a]) * J[a + 1];
  const double inv_prop_out = p_out.p0 - dispersion(m, p_out.p);
  const double inv_prop_in = p_in.p0 - dispersion(m, p_in.p);
  return contraction - (inv_prop_out - inv_prop_in);
}

Rational ward_defect_exact(const Rational& m, const Rational& p_out, const Rational& p_in, const Rational& p0_out,
                           const Rational& p0_in) {
  const Rational e_out = exact_sqrt(m * m + p_out * p_out);
  const Rational e_in = exact_sqrt(m * m + p_in * p_in);
  const Rational j1 = (p_out + p_in) / (e_out + e_in);
  const Rational contraction = (p0_out - p0_in) - (p_out - p_in) * j1;
  Rational defect = contraction - ((p0_out - e_out) - (p0_in - e_in));
  defect.canonicalize();
  return defect;
}

std::vector<double> alternative_covariant_current(double m, const std::vector<double>& p_out,
                                                  const std::vector<double>& p_in) {
  check_dims(p_out, p_in);
  const double e_out = dispersion(m, p_out);
  const double e_in = dispersion(m, p_in);
  const double norm = std::sqrt(2.0 * e_out * 2.0 * e_in);
  std::vector<double> J(p_out.size() + 1);
  J[0] = (e_out + e_in) / norm;
  for (std::size_t a = 0; a < p_out.size(); ++a) J[a + 1] = (p_out[a] + p_in[a]) / norm;
  return J;
}

// ---------------------------------------------------------------------------

LagrangianSpec truncated_model_lagrangian(int order, int dim, bool allow_large) {
  check_order(order, kMaxSymbolicOrder, allow_large, "truncated_model_lagrangian");
  check_dim(dim);
  Expr half(dim);
  half += Expr::field(dim, kPhiBar) * Expr::field(dim, kPhi, {IndexLabel::concrete(0)}) * ExactComplex(0, Rational(1, 2));
  const auto f = series_table(order);
  for (int l = 0; l <= order; ++l) {
    const ExactComplex c = coefficient_of(f[l], Rational(-1, 2));
    for_each_paired_index(l, dim, [&](const std::vector<int>& alpha) {
      half.add_term(Monomial{{}, f[l].mass_power, {Atom::deriv(kPhiBar), Atom::deriv(kPhi, alpha)}}, c);
    });
  }
  return LagrangianSpec::make(half + conj(half), {kPhi, kPhiBar});
}

Expr series_vector_current(int order, int dim, const std::string& sigma) {
  check_dim(dim);
  Expr half(dim, {sigma});
  const auto f = series_table(order);
  const ExactComplex plus(0, Rational(1, 2));
  for (int l = 1; l <= order; ++l) {
    for (int k = 1; k <= 2 * l; ++k) {
      const ExactComplex c = coefficient_of(f[l], k % 2 == 1 ? plus : -plus);
      for_each_paired_index(l, dim, [&](const std::vector<int>& alpha) {
        std::vector<int> tail(alpha.begin() + k, alpha.end());
        half.add_term(Monomial{{{sigma, alpha[k - 1]}}, f[l].mass_power,
                               {phibar_with_reversed(alpha, k - 1), Atom::deriv(kPhi, std::move(tail))}},
                      c);
      });
    }
  }
  return half + conj(half);
}

Expr series_energy_momentum(int order, int dim, const std::string& sigma, const std::string& mu) {
  check_dim(dim);
  if (sigma == mu) throw std::invalid_argument("sigma and mu must differ");
  Expr half(dim, {sigma, mu});
  const auto f = series_table(order);
  for (int l = 1; l <= order; ++l) {
    for (int k = 1; k <= 2 * l; ++k) {
      const ExactComplex c = coefficient_of(f[l], k % 2 == 1 ? Rational(-1, 2) : Rational(1, 2));
      for_each_paired_index(l, dim, [&](const std::vector<int>& alpha) {
        for (int m = 0; m < dim; ++m) {
          std::vector<int> tail(alpha.begin() + k, alpha.end());
          tail.push_back(m);
          half.add_term(Monomial{{{sigma, alpha[k - 1]}, {mu, m}}, f[l].mass_power,
                                 {phibar_with_reversed(alpha, k - 1), Atom::deriv(kPhi, std::move(tail))}},
                        c);
        }
      });
    }
  }
  return half + conj(half);
}

Expr series_angular_momentum(int order, int dim, const std::string& sigma, const std::string& a,
                             const std::string& b) {
  check_dim(dim);
  if (sigma == a || sigma == b || a == b) throw std::invalid_argument("labels must be distinct");
  std::set<int> spatial;
  for (int c = 1; c < dim; ++c) spatial.insert(c);

  // R_ab phi = x_a i d_b phi - x_b i d_a phi, lowered x, spatial pairs only.
  IndexLabel la = IndexLabel::free(a);
  IndexLabel lb = IndexLabel::free(b);
  Expr R = (Expr::coord_lower(dim, la) * Expr::field(dim, kPhi, {lb}) -
            Expr::coord_lower(dim, lb) * Expr::field(dim, kPhi, {la})) *
           ExactComplex::i();
  R = restrict_label(restrict_label(R, a, spatial), b, spatial);

  std::map<std::vector<int>, Expr> chains;
  auto chain = [&](const std::vector<int>& suffix) -> const Expr& {
    auto it = chains.find(suffix);
    if (it != chains.end()) return it->second;
    Expr e = R;
    for (auto r = suffix.rbegin(); r != suffix.rend(); ++r) e = total_derivative(e, IndexLabel::concrete(*r));
    return chains.emplace(suffix, std::move(e)).first->second;
  };

  std::vector<std::string> signature{sigma, a, b};
  Expr half(dim, signature);
  const auto f = series_table(order);
  const ExactComplex plus(0, Rational(1, 2));
  for (int l = 1; l <= order; ++l) {
    for (int k = 1; k <= 2 * l; ++k) {
      ExactComplex c = coefficient_of(f[l], k % 2 == 1 ? plus : -plus);
      Expr scalar = Expr::constant(dim, c, f[l].mass_power);
      for_each_paired_index(l, dim, [&](const std::vector<int>& alpha) {
        std::vector<int> tail(alpha.begin() + k, alpha.end());
        Expr left = Expr::selector(dim, sigma, alpha[k - 1]) * scalar;
        left = left * Expr::from_terms(dim, {}, {{Monomial{{}, 0, {phibar_with_reversed(alpha, k - 1)}}, 1}});
        half += left * chain(tail);
      });
    }
  }
  return half + conj(half);
}

// ---------------------------------------------------------------------------

std::string gauge_field_name(int sigma) { return "A" + std::to_string(sigma); }

LagrangianSpec gauged_model_lagrangian(int order, int dim) {
  check_order(order, kMaxSymbolicOrder, false, "gauged_model_lagrangian");
  check_dim(dim);
  std::set<std::string> gauge;
  std::vector<std::string> fields{kPhi, kPhiBar};
  for (int s = 0; s < dim; ++s) {
    gauge.insert(gauge_field_name(s));
    fields.push_back(gauge_field_name(s));
  }
  const Expr phi = Expr::field(dim, kPhi);
  const Expr phibar = Expr::field(dim, kPhiBar);
  const ExactComplex minus_i = -ExactComplex::i();

  // 1/2 phi* (i d_t - A^0 - sum_l (-1)^l f_l (p - A)^{2l}) phi, p^a = -i d_a.
  Expr half = phibar * Expr::field(dim, kPhi, {IndexLabel::concrete(0)}) * ExactComplex(0, Rational(1, 2));
  half -= Expr::field(dim, gauge_field_name(0)) * phibar * phi * ExactComplex(Rational(1, 2));

  const auto f = series_table(order);
  for (int l = 0; l <= order; ++l) {
    ExactComplex c = coefficient_of(f[l], Rational(l % 2 == 0 ? -1 : 1, 2));
    Expr operator_on_phi(dim);
    for_each_paired_index(l, dim, [&](const std::vector<int>& alpha) {
      const int n = static_cast<int>(alpha.size());
      // word position `a_slot` carries -A instead of p; -1 means the pure p word.
      for (int a_slot = -1; a_slot < n; ++a_slot) {
        Expr e = phi;
        for (int q = n - 1; q >= 0; --q) {
          if (q == a_slot) {
            e = Expr::field(dim, gauge_field_name(alpha[q])) * e * ExactComplex(-1);
          } else {
            e = total_derivative(e, IndexLabel::concrete(alpha[q])) * minus_i;
          }
        }
        operator_on_phi += e;
      }
    });
    half += phibar * operator_on_phi * Expr::constant(dim, c, f[l].mass_power);
  }
  Expr L = truncate_degree(half + conj(half, gauge), gauge, 1);
  return LagrangianSpec::make(std::move(L), fields, gauge);
}

Expr gauged_functional_derivative(int order, int dim, int sigma, bool allow_large) {
  check_order(order, 2, allow_large, "gauged_functional_derivative");
  check_dim(dim);
  if (sigma < 0 || sigma >= dim) throw std::invalid_argument("sigma out of range");
  const LagrangianSpec L = gauged_model_lagrangian(order, dim);
  Expr el = euler_lagrange(L, gauge_field_name(sigma));
  for (const auto& fname : fields_of(el)) {
    if (fname != kPhi && fname != kPhiBar) throw std::logic_error("functional derivative still depends on " + fname);
  }
  // A_0 = A^0 and A_a = -A^a, so -dS/dA_sigma = -EL for sigma = 0 and +EL otherwise.
  return sigma == 0 ? -el : el;
}

}  // namespace noether
