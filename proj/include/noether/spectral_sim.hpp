#pragma once

// Periodic-lattice simulator for i d_t phi = sqrt(-lap + m^2) phi.
//
// Field convention: phi(x) = V^{-1/2} sum_k a_k exp(i k.x) on the box-centred
// grid x_j = -box/2 + j h. Modes are stored in FFTW order (axis 0 slowest),
// k = 2 pi n / box with n in [-N/2, N/2); the n = -N/2 mode is kept at zero.

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace noether {

using cplx = std::complex<double>;

struct LatticeConfig {
  int d = 1;
  int N = 64;
  double box = 64.0;
  double m = 1.0;
  double dt = 0.01;
  int steps = 100;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  std::size_t total_modes() const;
  double spacing() const { return box / N; }
  double volume() const;
  double cell_volume() const;
};

/// Precomputed geometry shared by states on the same lattice.
struct LatticeGrid {
  LatticeConfig cfg;
  std::vector<std::vector<double>> k;  // k[axis][mode]
  std::vector<double> k2;
  std::vector<double> energy;
  std::vector<double> parity;          // (-1)^{sum n}, the box-centring phase
  std::vector<std::vector<double>> x;  // x[axis][point], upper index
  std::vector<char> nyquist;           // modes with some n = -N/2

  explicit LatticeGrid(const LatticeConfig& cfg);
};

struct SpectralState {
  std::shared_ptr<const LatticeGrid> grid;
  std::vector<cplx> coeffs;
  double t = 0.0;

  const LatticeConfig& cfg() const { return grid->cfg; }
};

struct PacketSpec {
  std::vector<double> center;   // x0, d entries
  double width = 1.0;           // sigma_x
  std::vector<double> carrier;  // k0, d entries
  double amplitude = 1.0;
};

struct PacketReport {
  double leakage = 0.0;         // max |a| on the outermost mode shell / max |a|
  double analytic_charge = 0.0; // A^2 (pi sigma^2)^{d/2}
};

SpectralState zero_state(const LatticeConfig& cfg);
SpectralState plane_wave(const LatticeConfig& cfg, const std::vector<int>& n, cplx amplitude);
SpectralState from_position(const LatticeConfig& cfg, const std::vector<cplx>& field);

/// Gaussian packet built from its continuum Fourier transform. Rejects widths
/// below two grid spacings or above a quarter of the box.
SpectralState init_packet(const LatticeConfig& cfg, const PacketSpec& packet, PacketReport* report = nullptr);

/// Exact multiplier evolution: a_k <- exp(-i E(k) dt)^n a_k, advancing t by n dt.
void evolve(SpectralState& state, int n_steps);

std::vector<cplx> position_field(const SpectralState& state);
/// Position-space field of the multiplier applied to the coefficients.
std::vector<cplx> apply_hamiltonian(const SpectralState& state);

struct ChargeRecord {
  double t = 0.0;
  double Q = 0.0;
  double E_tot = 0.0;
  std::vector<double> P;                    // P^a, a = 1..d
  std::vector<double> M;                    // M_12, M_13, M_23 (d >= 2)
  std::optional<double> continuity_defect;  // max |d_t J^0 + div J|
  double leakage = 0.0;                     // boundary-band charge fraction
};

ChargeRecord total_charges(const SpectralState& state);

/// Angular momentum M_ab = int Re[phi* (x_a i d_b - x_b i d_a) phi], x lowered, pairs a < b.
std::vector<double> angular_momentum(const SpectralState& state);

/// Fraction of the charge within box/8 of any face.
double boundary_leakage(const SpectralState& state);

/// Largest |k|^2 over modes whose amplitude exceeds rel_threshold * max|a|.
double band_limit(const SpectralState& state, double rel_threshold = 1e-15);

struct CurrentField {
  std::vector<std::vector<double>> J;  // J[axis][point]
  std::vector<double> total;           // integral of each component
  bool divergent = false;
  std::string warning;
};

/// Mode-count gate for the O(modes^2) bilinear sums.
inline constexpr std::size_t kBilinearModeLimit = std::size_t{1} << 16;

CurrentField current_closed_bilinear(const SpectralState& state);
/// Series truncated at `order`; flags states whose support reaches |k|^2 >= m^2.
CurrentField current_series(const SpectralState& state, int order);

/// max_x |d_t J^0 + div J| with d_t J^0 = 2 Im(phi* H phi) and the bilinear flux.
double continuity_defect(const SpectralState& state);
/// Same check for each energy-momentum row mu = 0..d.
std::vector<double> emt_continuity_defects(const SpectralState& state);

struct AngularDrift {
  double drift = 0.0;        // max |M(t)-M(0)| / (|M(0)| + Q box)
  double initial = 0.0;
  double final_value = 0.0;
  double max_leakage = 0.0;
  bool boundary_contact = false;
};

/// Evolves `state` while tracking M_ab for the pair (a, b) (1-based spatial axes).
AngularDrift angular_momentum_drift(SpectralState& state, int n_steps, int a = 1, int b = 2,
                                    double leakage_limit = 1e-8, int record_every = 10);

enum class DiscreteSymmetry { P, T, C };

/// ||i d_t phi' - H phi'|| / ||m phi|| for the transformed solution phi'.
double symmetry_test(const SpectralState& state, DiscreteSymmetry s);

/// Charge-weighted centroid of the density, per axis.
std::vector<double> centroid(const SpectralState& state);

}  // namespace noether
