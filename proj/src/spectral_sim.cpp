#include "noether/spectral_sim.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "noether/nonlocal_model.hpp"
#include "noether/parallel.hpp"

namespace noether {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place d-dimensional complex transform pair on a private buffer.
class Fft {
public:
  Fft(int d, int N) : size_(1) {
    std::vector<int> dims(static_cast<std::size_t>(d), N);
    for (int v : dims) size_ *= static_cast<std::size_t>(v);
    buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size_));
    if (buffer_ == nullptr) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward_ = fftw_plan_dft(d, dims.data(), buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft(d, dims.data(), buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  // Unnormalized; backward uses exp(+2 pi i n j / N).
  void forward(std::vector<cplx>& data) { run(forward_, data); }
  void backward(std::vector<cplx>& data) { run(backward_, data); }

private:
  void run(fftw_plan plan, std::vector<cplx>& data) {
    if (data.size() != size_) throw std::logic_error("transform size mismatch");
    std::copy(data.begin(), data.end(), reinterpret_cast<cplx*>(buffer_));
    fftw_execute(plan);
    const cplx* out = reinterpret_cast<const cplx*>(buffer_);
    std::copy(out, out + size_, data.begin());
  }

  std::size_t size_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

std::vector<cplx> to_position(const LatticeGrid& g, std::vector<cplx> modes, Fft& fft) {
  for (std::size_t i = 0; i < modes.size(); ++i) modes[i] *= g.parity[i];
  fft.backward(modes);
  const double scale = 1.0 / std::sqrt(g.cfg.volume());
  for (auto& v : modes) v *= scale;
  return modes;
}

std::vector<cplx> to_modes(const LatticeGrid& g, std::vector<cplx> field, Fft& fft) {
  fft.forward(field);
  const double scale = std::sqrt(g.cfg.volume()) / static_cast<double>(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) field[i] *= scale * g.parity[i];
  return field;
}

template <class F>
std::vector<cplx> multiplied(const SpectralState& s, F&& multiplier) {
  std::vector<cplx> out(s.coeffs.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.coeffs[i] * multiplier(i);
  return out;
}

double l2_norm(const std::vector<cplx>& f, double dv) {
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return std::sqrt(s * dv);
}

// Storage index along `axis` of flat mode/point index i (axis 0 slowest).
int axis_index(std::size_t i, int axis, int d, int N) {
  for (int a = d - 1; a > axis; --a) i /= static_cast<std::size_t>(N);
  return static_cast<int>(i % static_cast<std::size_t>(N));
}

std::size_t flat_index(const std::vector<int>& idx, int N) {
  std::size_t f = 0;
  for (int v : idx) f = f * static_cast<std::size_t>(N) + static_cast<std::size_t>(v);
  return f;
}

// V^{-1} sum_{k',k} conj(a_k') a_k exp(i (k-k').x) K(k', k) on the grid.
template <class Kernel>
std::vector<cplx> bilinear_field(const SpectralState& s, Kernel&& kernel, Fft& fft) {
  const LatticeGrid& g = *s.grid;
  const std::size_t M = s.coeffs.size();
  if (M > kBilinearModeLimit) {
    throw std::invalid_argument("bilinear current needs at most " + std::to_string(kBilinearModeLimit) +
                                " modes, lattice has " + std::to_string(M));
  }
  const int d = g.cfg.d;
  const int N = g.cfg.N;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < M; ++i) {
    if (s.coeffs[i] != cplx(0.0, 0.0)) active.push_back(i);
  }
  std::vector<std::vector<int>> idx(active.size(), std::vector<int>(static_cast<std::size_t>(d)));
  for (std::size_t p = 0; p < active.size(); ++p) {
    for (int a = 0; a < d; ++a) idx[p][static_cast<std::size_t>(a)] = axis_index(active[p], a, d, N);
  }

  const std::size_t chunks = std::min<std::size_t>(16, std::max<std::size_t>(1, active.size()));
  std::vector<std::vector<cplx>> partial(chunks, std::vector<cplx>(M, cplx(0.0, 0.0)));
  parallel_chunks(active.size(), chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<int> diff(static_cast<std::size_t>(d));
    auto& bins = partial[c];
    for (std::size_t pp = begin; pp < end; ++pp) {
      const std::size_t kp = active[pp];
      const cplx left = std::conj(s.coeffs[kp]) * g.parity[kp];
      for (std::size_t q = 0; q < active.size(); ++q) {
        const std::size_t k = active[q];
        for (int a = 0; a < d; ++a) {
          diff[static_cast<std::size_t>(a)] = (idx[q][static_cast<std::size_t>(a)] -
                                               idx[pp][static_cast<std::size_t>(a)] + N) % N;
        }
        bins[flat_index(diff, N)] += left * s.coeffs[k] * g.parity[k] * kernel(kp, k);
      }
    }
  });
  std::vector<cplx> total(M, cplx(0.0, 0.0));
  for (const auto& bins : partial) {
    for (std::size_t i = 0; i < M; ++i) total[i] += bins[i];
  }
  fft.backward(total);
  const double inv_v = 1.0 / g.cfg.volume();
  for (auto& v : total) v *= inv_v;
  return total;
}

// Position of M_ab in the (1,2),(1,3),(2,3) ordering.
std::size_t pair_slot(int d, int a, int b) {
  std::size_t slot = 0;
  for (int i = 1; i <= d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      if (i == a && j == b) return slot;
      ++slot;
    }
  }
  throw std::invalid_argument("axis pair out of range");
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------

void LatticeConfig::validate() const {
  if (d < 1 || d > 3) throw std::invalid_argument("lattice.d must be 1, 2 or 3");
  if (N < 4 || (N & (N - 1)) != 0) throw std::invalid_argument("lattice.N must be a power of two >= 4");
  if (!(box > 0.0) || !std::isfinite(box)) throw std::invalid_argument("lattice.box must be positive");
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("lattice.m must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("run.dt must be positive");
  if (steps < 0) throw std::invalid_argument("run.steps must be non-negative");
}

std::size_t LatticeConfig::total_modes() const {
  std::size_t n = 1;
  for (int a = 0; a < d; ++a) n *= static_cast<std::size_t>(N);
  return n;
}

double LatticeConfig::volume() const { return std::pow(box, d); }
double LatticeConfig::cell_volume() const { return std::pow(spacing(), d); }

LatticeGrid::LatticeGrid(const LatticeConfig& c) : cfg(c) {
  cfg.validate();
  const std::size_t M = cfg.total_modes();
  const double dk = 2.0 * std::numbers::pi / cfg.box;
  const double h = cfg.spacing();
  k.assign(static_cast<std::size_t>(cfg.d), std::vector<double>(M));
  x.assign(static_cast<std::size_t>(cfg.d), std::vector<double>(M));
  k2.assign(M, 0.0);
  energy.assign(M, 0.0);
  parity.assign(M, 1.0);
  nyquist.assign(M, 0);
  for (std::size_t i = 0; i < M; ++i) {
    int nsum = 0;
    for (int a = 0; a < cfg.d; ++a) {
      int j = axis_index(i, a, cfg.d, cfg.N);
      int n = j < cfg.N / 2 ? j : j - cfg.N;
      if (n == -cfg.N / 2) nyquist[i] = 1;
      nsum += n;
      k[static_cast<std::size_t>(a)][i] = dk * n;
      x[static_cast<std::size_t>(a)][i] = -0.5 * cfg.box + j * h;
      k2[i] += (dk * n) * (dk * n);
    }
    parity[i] = (nsum % 2 == 0) ? 1.0 : -1.0;
    energy[i] = std::sqrt(k2[i] + cfg.m * cfg.m);
  }
}

SpectralState zero_state(const LatticeConfig& cfg) {
  SpectralState s;
  s.grid = std::make_shared<const LatticeGrid>(cfg);
  s.coeffs.assign(cfg.total_modes(), cplx(0.0, 0.0));
  return s;
}

SpectralState plane_wave(const LatticeConfig& cfg, const std::vector<int>& n, cplx amplitude) {
  SpectralState s = zero_state(cfg);
  if (static_cast<int>(n.size()) != cfg.d) throw std::invalid_argument("plane wave needs d mode numbers");
  std::vector<int> idx;
  for (int v : n) {
    if (v <= -cfg.N / 2 || v >= cfg.N / 2) throw std::invalid_argument("plane-wave mode outside (-N/2, N/2)");
    idx.push_back(v < 0 ? v + cfg.N : v);
  }
  s.coeffs[flat_index(idx, cfg.N)] = amplitude;
  return s;
}

SpectralState from_position(const LatticeConfig& cfg, const std::vector<cplx>& field) {
  SpectralState s = zero_state(cfg);
  if (field.size() != s.coeffs.size()) throw std::invalid_argument("field size does not match the lattice");
  Fft fft(cfg.d, cfg.N);
  s.coeffs = to_modes(*s.grid, field, fft);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    if (s.grid->nyquist[i]) s.coeffs[i] = 0.0;
  }
  return s;
}

SpectralState init_packet(const LatticeConfig& cfg, const PacketSpec& packet, PacketReport* report) {
  SpectralState s = zero_state(cfg);
  const LatticeGrid& g = *s.grid;
  const int d = cfg.d;
  if (static_cast<int>(packet.center.size()) != d) throw std::invalid_argument("packet.center needs d entries");
  if (static_cast<int>(packet.carrier.size()) != d) throw std::invalid_argument("packet.carrier needs d entries");
  const double h = cfg.spacing();
  const double sigma = packet.width;
  if (!(sigma >= 2.0 * h)) {
    throw std::invalid_argument("packet.width " + std::to_string(sigma) + " is unresolved: needs >= 2 grid spacings (" +
                                std::to_string(2.0 * h) + ")");
  }
  if (!(sigma <= 0.25 * cfg.box)) {
    throw std::invalid_argument("packet.width " + std::to_string(sigma) + " wraps the box: needs <= box/4 (" +
                                std::to_string(0.25 * cfg.box) + ")");
  }
  const double k_nyquist = std::numbers::pi / h;
  for (int a = 0; a < d; ++a) {
    if (std::fabs(packet.carrier[static_cast<std::size_t>(a)]) >= k_nyquist) {
      throw std::invalid_argument("packet.carrier exceeds the lattice Nyquist wavenumber");
    }
  }

  const double prefactor =
      packet.amplitude * std::pow(2.0 * std::numbers::pi * sigma * sigma, 0.5 * d) / std::sqrt(cfg.volume());
  double max_amp = 0.0;
  double edge_amp = 0.0;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    if (g.nyquist[i]) continue;
    double q2 = 0.0;
    double phase = 0.0;
    bool edge = false;
    for (int a = 0; a < d; ++a) {
      const double dk = g.k[static_cast<std::size_t>(a)][i] - packet.carrier[static_cast<std::size_t>(a)];
      q2 += dk * dk;
      phase -= dk * packet.center[static_cast<std::size_t>(a)];
      int j = axis_index(i, a, d, cfg.N);
      if (j == cfg.N / 2 - 1 || j == cfg.N / 2 + 1) edge = true;
    }
    s.coeffs[i] = std::polar(prefactor * std::exp(-0.5 * sigma * sigma * q2), phase);
    const double amp = std::abs(s.coeffs[i]);
    max_amp = std::max(max_amp, amp);
    if (edge) edge_amp = std::max(edge_amp, amp);
  }
  if (report != nullptr) {
    report->leakage = max_amp > 0.0 ? edge_amp / max_amp : 0.0;
    report->analytic_charge =
        packet.amplitude * packet.amplitude * std::pow(std::numbers::pi * sigma * sigma, 0.5 * d);
  }
  return s;
}

void evolve(SpectralState& state, int n_steps) {
  if (n_steps < 0) throw std::invalid_argument("n_steps must be non-negative");
  const LatticeGrid& g = *state.grid;
  const double dt = g.cfg.dt;
  // exp(-i E dt)^n evaluated as a single phase, so rounding does not accumulate per step.
  const double elapsed = n_steps * dt;
  for (std::size_t i = 0; i < state.coeffs.size(); ++i) state.coeffs[i] *= std::polar(1.0, -g.energy[i] * elapsed);
  state.t += elapsed;
}

std::vector<cplx> position_field(const SpectralState& state) {
  Fft fft(state.cfg().d, state.cfg().N);
  return to_position(*state.grid, state.coeffs, fft);
}

std::vector<cplx> apply_hamiltonian(const SpectralState& state) {
  Fft fft(state.cfg().d, state.cfg().N);
  const auto& E = state.grid->energy;
  return to_position(*state.grid, multiplied(state, [&](std::size_t i) { return E[i]; }), fft);
}

// ---------------------------------------------------------------------------

std::vector<double> angular_momentum(const SpectralState& state) {
  const LatticeGrid& g = *state.grid;
  const int d = g.cfg.d;
  std::vector<double> out;
  if (d < 2) return out;
  Fft fft(d, g.cfg.N);
  const auto phi = to_position(g, state.coeffs, fft);
  std::vector<std::vector<cplx>> grad;
  for (int a = 0; a < d; ++a) {
    const auto& ka = g.k[static_cast<std::size_t>(a)];
    grad.push_back(to_position(g, multiplied(state, [&](std::size_t i) { return cplx(0.0, ka[i]); }), fft));
  }
  const double dv = g.cfg.cell_volume();
  const cplx I(0.0, 1.0);
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      const auto& xa = g.x[static_cast<std::size_t>(a)];
      const auto& xb = g.x[static_cast<std::size_t>(b)];
      double sum = 0.0;
      for (std::size_t p = 0; p < phi.size(); ++p) {
        // x_a = -x^a for spatial axes.
        cplx r = -xa[p] * I * grad[static_cast<std::size_t>(b)][p] + xb[p] * I * grad[static_cast<std::size_t>(a)][p];
        sum += std::real(std::conj(phi[p]) * r);
      }
      out.push_back(sum * dv);
    }
  }
  return out;
}

double boundary_leakage(const SpectralState& state) {
  const LatticeGrid& g = *state.grid;
  const auto phi = position_field(state);
  const double inner = 0.5 * g.cfg.box - 0.125 * g.cfg.box;
  double band = 0.0;
  double total = 0.0;
  for (std::size_t p = 0; p < phi.size(); ++p) {
    const double w = std::norm(phi[p]);
    total += w;
    for (int a = 0; a < g.cfg.d; ++a) {
      if (std::fabs(g.x[static_cast<std::size_t>(a)][p]) > inner) {
        band += w;
        break;
      }
    }
  }
  return total > 0.0 ? band / total : 0.0;
}

double band_limit(const SpectralState& state, double rel_threshold) {
  double max_amp = 0.0;
  for (const auto& c : state.coeffs) max_amp = std::max(max_amp, std::abs(c));
  double kmax = 0.0;
  for (std::size_t i = 0; i < state.coeffs.size(); ++i) {
    if (std::abs(state.coeffs[i]) > rel_threshold * max_amp) kmax = std::max(kmax, state.grid->k2[i]);
  }
  return kmax;
}

ChargeRecord total_charges(const SpectralState& state) {
  const LatticeGrid& g = *state.grid;
  ChargeRecord r;
  r.t = state.t;
  const auto phi = position_field(state);
  double q = 0.0;
  for (const auto& v : phi) q += std::norm(v);
  r.Q = q * g.cfg.cell_volume();
  r.P.assign(static_cast<std::size_t>(g.cfg.d), 0.0);
  for (std::size_t i = 0; i < state.coeffs.size(); ++i) {
    const double w = std::norm(state.coeffs[i]);
    r.E_tot += w * g.energy[i];
    for (int a = 0; a < g.cfg.d; ++a) r.P[static_cast<std::size_t>(a)] += w * g.k[static_cast<std::size_t>(a)][i];
  }
  r.M = angular_momentum(state);
  r.leakage = boundary_leakage(state);
  return r;
}

std::vector<double> centroid(const SpectralState& state) {
  const LatticeGrid& g = *state.grid;
  const auto phi = position_field(state);
  std::vector<double> c(static_cast<std::size_t>(g.cfg.d), 0.0);
  double q = 0.0;
  for (std::size_t p = 0; p < phi.size(); ++p) {
    const double w = std::norm(phi[p]);
    q += w;
    for (int a = 0; a < g.cfg.d; ++a) c[static_cast<std::size_t>(a)] += w * g.x[static_cast<std::size_t>(a)][p];
  }
  for (auto& v : c) v /= q;
  return c;
}

// ---------------------------------------------------------------------------

CurrentField current_closed_bilinear(const SpectralState& state) {
  const LatticeGrid& g = *state.grid;
  Fft fft(g.cfg.d, g.cfg.N);
  CurrentField out;
  const double dv = g.cfg.cell_volume();
  for (int a = 0; a < g.cfg.d; ++a) {
    const auto& ka = g.k[static_cast<std::size_t>(a)];
    auto field = bilinear_field(
        state, [&](std::size_t kp, std::size_t k) { return (ka[kp] + ka[k]) / (g.energy[kp] + g.energy[k]); }, fft);
    std::vector<double> J(field.size());
    double total = 0.0;
    for (std::size_t p = 0; p < field.size(); ++p) {
      J[p] = field[p].real();
      total += J[p];
    }
    out.J.push_back(std::move(J));
    out.total.push_back(total * dv);
  }
  return out;
}

CurrentField current_series(const SpectralState& state, int order) {
  if (order < 0) throw std::invalid_argument("series order must be non-negative");
  const LatticeGrid& g = *state.grid;
  const double m = g.cfg.m;
  CurrentField out;
  const double reach = band_limit(state);
  if (reach >= m * m) {
    out.divergent = true;
    out.warning = "spectral support reaches |k|^2 = " + std::to_string(reach) + " >= m^2; the series diverges";
  }
  Fft fft(g.cfg.d, g.cfg.N);
  // Scaled coefficients: f_l lap^l = (c_l / m) (lap/m^2)^l m^{2}, and the current
  // carries one lap fewer, so J = -(1/m) sum_l c_l Im(A_l) with lap -> lap/m^2.
  std::vector<double> c(static_cast<std::size_t>(order) + 1);
  {
    auto table = series_table(order);
    for (int l = 0; l <= order; ++l) c[static_cast<std::size_t>(l)] = table[static_cast<std::size_t>(l)].value.get_d();
  }
  const std::size_t P = state.coeffs.size();
  std::vector<std::vector<cplx>> U;
  for (int j = 0; j < std::max(order, 0); ++j) {
    U.push_back(to_position(g, multiplied(state, [&](std::size_t i) { return std::pow(-g.k2[i] / (m * m), j); }), fft));
  }
  const double dv = g.cfg.cell_volume();
  for (int a = 0; a < g.cfg.d; ++a) {
    const auto& ka = g.k[static_cast<std::size_t>(a)];
    std::vector<std::vector<cplx>> W;
    for (int j = 0; j < order; ++j) {
      W.push_back(to_position(
          g, multiplied(state, [&](std::size_t i) { return cplx(0.0, ka[i]) * std::pow(-g.k2[i] / (m * m), j); }),
          fft));
    }
    std::vector<double> J(P, 0.0);
    for (int l = 1; l <= order; ++l) {
      const double cl = c[static_cast<std::size_t>(l)];
      for (int j = 0; j < l; ++j) {
        const auto& Uj = U[static_cast<std::size_t>(j)];
        const auto& Wj = W[static_cast<std::size_t>(j)];
        const auto& Ur = U[static_cast<std::size_t>(l - 1 - j)];
        const auto& Wr = W[static_cast<std::size_t>(l - 1 - j)];
        for (std::size_t p = 0; p < P; ++p) {
          J[p] -= cl / m * std::imag(std::conj(Uj[p]) * Wr[p] - std::conj(Wj[p]) * Ur[p]);
        }
      }
    }
    double total = 0.0;
    for (double v : J) total += v;
    out.J.push_back(std::move(J));
    out.total.push_back(total * dv);
  }
  return out;
}

double continuity_defect(const SpectralState& state) {
  const LatticeGrid& g = *state.grid;
  Fft fft(g.cfg.d, g.cfg.N);
  const auto phi = to_position(g, state.coeffs, fft);
  const auto Hphi = to_position(g, multiplied(state, [&](std::size_t i) { return g.energy[i]; }), fft);
  auto div = bilinear_field(
      state,
      [&](std::size_t kp, std::size_t k) {
        double s = 0.0;
        for (int a = 0; a < g.cfg.d; ++a) {
          const auto& ka = g.k[static_cast<std::size_t>(a)];
          s += (ka[k] - ka[kp]) * (ka[kp] + ka[k]);
        }
        return cplx(0.0, s / (g.energy[kp] + g.energy[k]));
      },
      fft);
  std::vector<double> defect(phi.size());
  for (std::size_t p = 0; p < phi.size(); ++p) {
    const double dt_rho = 2.0 * std::imag(std::conj(phi[p]) * Hphi[p]);
    defect[p] = dt_rho + div[p].real();
  }
  return max_abs(defect);
}

std::vector<double> emt_continuity_defects(const SpectralState& state) {
  const LatticeGrid& g = *state.grid;
  const int d = g.cfg.d;
  Fft fft(d, g.cfg.N);
  const cplx I(0.0, 1.0);
  const auto& E = g.energy;
  // psi = d_t phi = -i H phi.
  const auto phi = to_position(g, state.coeffs, fft);
  const auto Hphi = to_position(g, multiplied(state, [&](std::size_t i) { return E[i]; }), fft);
  const auto psi = to_position(g, multiplied(state, [&](std::size_t i) { return -I * E[i]; }), fft);
  const auto Hpsi = to_position(g, multiplied(state, [&](std::size_t i) { return -I * E[i] * E[i]; }), fft);

  std::vector<double> result;
  for (int mu = 0; mu <= d; ++mu) {
    std::vector<double> dt_density(phi.size());
    if (mu == 0) {
      for (std::size_t p = 0; p < phi.size(); ++p) {
        dt_density[p] = std::real(std::conj(psi[p]) * Hphi[p] + std::conj(phi[p]) * Hpsi[p]);
      }
    } else {
      const auto& ka = g.k[static_cast<std::size_t>(mu - 1)];
      const auto dphi = to_position(g, multiplied(state, [&](std::size_t i) { return I * ka[i]; }), fft);
      const auto dpsi = to_position(g, multiplied(state, [&](std::size_t i) { return I * ka[i] * (-I * E[i]); }), fft);
      for (std::size_t p = 0; p < phi.size(); ++p) {
        dt_density[p] = -std::imag(std::conj(psi[p]) * dphi[p] + std::conj(phi[p]) * dpsi[p]);
      }
    }
    auto div = bilinear_field(
        state,
        [&](std::size_t kp, std::size_t k) {
          double qj = 0.0;
          for (int a = 0; a < d; ++a) {
            const auto& ka = g.k[static_cast<std::size_t>(a)];
            qj += (ka[k] - ka[kp]) * (ka[kp] + ka[k]);
          }
          qj /= (E[kp] + E[k]);
          const double half_sum_lower =
              mu == 0 ? 0.5 * (E[kp] + E[k])
                      : -0.5 * (g.k[static_cast<std::size_t>(mu - 1)][kp] + g.k[static_cast<std::size_t>(mu - 1)][k]);
          return cplx(0.0, qj * half_sum_lower);
        },
        fft);
    std::vector<double> defect(phi.size());
    for (std::size_t p = 0; p < phi.size(); ++p) defect[p] = dt_density[p] + div[p].real();
    result.push_back(max_abs(defect));
  }
  return result;
}

// ---------------------------------------------------------------------------

AngularDrift angular_momentum_drift(SpectralState& state, int n_steps, int a, int b, double leakage_limit,
                                    int record_every) {
  const int d = state.cfg().d;
  if (d < 2) throw std::invalid_argument("angular momentum needs d >= 2");
  if (a < 1 || b > d || a >= b) throw std::invalid_argument("axis pair must satisfy 1 <= a < b <= d");
  if (record_every < 1) record_every = 1;
  const std::size_t slot = pair_slot(d, a, b);
  AngularDrift out;
  const ChargeRecord first = total_charges(state);
  out.initial = first.M[slot];
  out.final_value = out.initial;
  out.max_leakage = first.leakage;
  const double scale = std::fabs(out.initial) + first.Q * state.cfg().box;
  int done = 0;
  while (done < n_steps) {
    const int chunk = std::min(record_every, n_steps - done);
    evolve(state, chunk);
    done += chunk;
    const double leak = boundary_leakage(state);
    out.max_leakage = std::max(out.max_leakage, leak);
    if (leak > leakage_limit) {
      out.boundary_contact = true;
      break;
    }
    out.final_value = angular_momentum(state)[slot];
    out.drift = std::max(out.drift, std::fabs(out.final_value - out.initial) / scale);
  }
  return out;
}

double symmetry_test(const SpectralState& state, DiscreteSymmetry s) {
  const LatticeGrid& g = *state.grid;
  const int d = g.cfg.d;
  const int N = g.cfg.N;
  Fft fft(d, N);
  const cplx I(0.0, 1.0);
  const auto phi = to_position(g, state.coeffs, fft);
  const auto psi = to_position(g, multiplied(state, [&](std::size_t i) { return -I * g.energy[i]; }), fft);

  std::vector<cplx> transformed(phi.size());
  std::vector<cplx> dt_transformed(phi.size());
  switch (s) {
    case DiscreteSymmetry::P: {
      std::vector<int> idx(static_cast<std::size_t>(d));
      for (std::size_t p = 0; p < phi.size(); ++p) {
        for (int a = 0; a < d; ++a) idx[static_cast<std::size_t>(a)] = (N - axis_index(p, a, d, N)) % N;
        const std::size_t q = flat_index(idx, N);
        transformed[p] = phi[q];
        dt_transformed[p] = psi[q];
      }
      break;
    }
    case DiscreteSymmetry::T:
      for (std::size_t p = 0; p < phi.size(); ++p) {
        transformed[p] = std::conj(phi[p]);
        dt_transformed[p] = -std::conj(psi[p]);
      }
      break;
    case DiscreteSymmetry::C:
      for (std::size_t p = 0; p < phi.size(); ++p) {
        transformed[p] = std::conj(phi[p]);
        dt_transformed[p] = std::conj(psi[p]);
      }
      break;
  }
  auto modes = to_modes(g, transformed, fft);
  for (std::size_t i = 0; i < modes.size(); ++i) modes[i] *= g.energy[i];
  const auto H_transformed = to_position(g, std::move(modes), fft);
  std::vector<cplx> residual(phi.size());
  for (std::size_t p = 0; p < phi.size(); ++p) residual[p] = I * dt_transformed[p] - H_transformed[p];
  const double dv = g.cfg.cell_volume();
  const double denom = g.cfg.m * l2_norm(phi, dv);
  if (denom == 0.0) return 0.0;
  return l2_norm(residual, dv) / denom;
}

}  // namespace noether
