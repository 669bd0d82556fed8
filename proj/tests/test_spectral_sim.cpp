#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "noether/spectral_sim.hpp"

using namespace noether;

namespace {

constexpr double kPi = 3.14159265358979323846;

LatticeConfig lattice(int d, int N, double box) {
  LatticeConfig c;
  c.d = d;
  c.N = N;
  c.box = box;
  c.m = 1.0;
  c.dt = 0.01;
  return c;
}

double max_abs_diff(const std::vector<double>& a, double value) {
  double worst = 0.0;
  for (double v : a) worst = std::max(worst, std::fabs(v - value));
  return worst;
}

}  // namespace

TEST_CASE("config validation names the field") {
  LatticeConfig c = lattice(1, 63, 10.0);
  try {
    c.validate();
    FAIL("odd N accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("N") != std::string::npos);
  }
  CHECK_THROWS(lattice(4, 16, 10.0).validate());
  CHECK_THROWS(lattice(1, 16, -1.0).validate());
}

TEST_CASE("single mode: phase, charges and uniform current") {
  LatticeConfig c = lattice(1, 32, 20.0);
  const cplx amp(0.6, -0.8);
  SpectralState s = plane_wave(c, {3}, amp);
  const double k = 2 * kPi * 3 / c.box;
  const double E = std::sqrt(k * k + 1.0);

  ChargeRecord r = total_charges(s);
  CHECK(r.Q == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.P[0] / r.Q == doctest::Approx(k));
  CHECK(r.E_tot / r.Q == doctest::Approx(E));

  const std::size_t slot = 3;
  cplx before = s.coeffs[slot];
  evolve(s, 7);
  CHECK(std::abs(s.coeffs[slot] - before * std::polar(1.0, -E * 7 * c.dt)) < 1e-15);
  CHECK(s.t == doctest::Approx(0.07));

  CurrentField j = current_closed_bilinear(s);
  CHECK(max_abs_diff(j.J[0], std::norm(amp) * k / (E * c.volume())) < 1e-15);
  CHECK(j.total[0] == doctest::Approx(std::norm(amp) * k / E));
  CHECK(continuity_defect(s) < 1e-14);
}

TEST_CASE("two modes: cross terms integrate to zero") {
  LatticeConfig c = lattice(1, 32, 20.0);
  SpectralState a = plane_wave(c, {2}, cplx(0.5, 0.1));
  SpectralState b = plane_wave(c, {-5}, cplx(-0.3, 0.7));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += b.coeffs[i];
  double expected = 0.0;
  for (auto [n, amp] : {std::pair{2, cplx(0.5, 0.1)}, std::pair{-5, cplx(-0.3, 0.7)}}) {
    double k = 2 * kPi * n / c.box;
    expected += std::norm(amp) * k / std::sqrt(k * k + 1.0);
  }
  CHECK(current_closed_bilinear(a).total[0] == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("Gaussian packet: norm, spectrum, leakage") {
  LatticeConfig c = lattice(1, 128, 64.0);
  PacketReport rep;
  SpectralState s = init_packet(c, {{0.0}, c.box / 16, {0.0}, 1.0}, &rep);
  CHECK(std::fabs(total_charges(s).Q - rep.analytic_charge) / rep.analytic_charge < 1e-10);
  CHECK(rep.leakage < 1e-12);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    if (s.coeffs[i] == cplx(0.0)) continue;
    CHECK(std::fabs(s.coeffs[i].imag()) < 1e-14 * std::abs(s.coeffs[i]) + 1e-300);
    CHECK(s.coeffs[i].real() > 0.0);
  }

  // A carrier moves the spectral peak to k0.
  const double k0 = 2 * kPi * 10 / c.box;
  SpectralState m = init_packet(c, {{0.0}, c.box / 16, {k0}, 1.0});
  std::size_t peak = 0;
  for (std::size_t i = 0; i < m.coeffs.size(); ++i) {
    if (std::abs(m.coeffs[i]) > std::abs(m.coeffs[peak])) peak = i;
  }
  CHECK(m.grid->k[0][peak] == doctest::Approx(k0));
}

TEST_CASE("unresolved or oversized packets are rejected") {
  LatticeConfig c = lattice(1, 64, 64.0);
  CHECK_THROWS_AS(init_packet(c, {{0.0}, 1.0, {0.0}, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(init_packet(c, {{0.0}, 20.0, {0.0}, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(init_packet(c, {{0.0}, 4.0, {4.0}, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(init_packet(c, {{0.0, 0.0}, 4.0, {0.0}, 1.0}), std::invalid_argument);
}

TEST_CASE("Parseval and unitarity") {
  LatticeConfig c = lattice(2, 32, 40.0);
  SpectralState s = init_packet(c, {{1.0, -2.0}, 4.0, {0.5, 0.3}, 0.7});
  double norm_k = 0.0;
  for (const auto& a : s.coeffs) norm_k += std::norm(a);
  CHECK(std::fabs(total_charges(s).Q - norm_k) / norm_k < 1e-13);
  std::vector<double> moduli;
  for (const auto& a : s.coeffs) moduli.push_back(std::abs(a));
  for (int step = 0; step < 5; ++step) {
    evolve(s, 1);
    double n = 0.0;
    for (const auto& a : s.coeffs) n += std::norm(a);
    CHECK(std::fabs(n - norm_k) / norm_k < 1e-15);
  }
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) CHECK(std::abs(s.coeffs[i]) == doctest::Approx(moduli[i]));
}

TEST_CASE("group velocity of a narrow-band packet") {
  LatticeConfig c = lattice(1, 1024, 800.0);
  c.dt = 0.1;
  const double k0 = 0.8;
  SpectralState s = init_packet(c, {{-100.0}, 40.0, {k0}, 1.0});
  double x0 = centroid(s)[0];
  evolve(s, 2000);
  double t = s.t;
  double v = (centroid(s)[0] - x0) / t;
  CHECK(v == doctest::Approx(k0 / std::sqrt(k0 * k0 + 1.0)).epsilon(0.01));
}

TEST_CASE("series current flags support outside the radius") {
  LatticeConfig c = lattice(1, 64, 20.0);
  SpectralState s = init_packet(c, {{0.0}, 1.0, {0.0}, 1.0});
  CurrentField f = current_series(s, 4);
  CHECK(f.divergent);
  CHECK_FALSE(f.warning.empty());
}

TEST_CASE("angular momentum") {
  LatticeConfig c = lattice(2, 64, 60.0);
  SpectralState sym = init_packet(c, {{0.0, 0.0}, 4.0, {0.0, 0.0}, 1.0});
  CHECK(std::fabs(total_charges(sym).M[0]) < 1e-12);

  // x_1 P_2 - x_2 P_1 with lowered coordinates: -b Q k0 for a packet at height b moving along axis 1.
  const double b = 6.0, k0 = 0.5;
  SpectralState s = init_packet(c, {{-5.0, b}, 4.0, {k0, 0.0}, 1.0});
  ChargeRecord r = total_charges(s);
  CHECK(r.M[0] == doctest::Approx(-b * r.Q * k0).epsilon(1e-8));
}

TEST_CASE("discrete symmetries") {
  LatticeConfig c = lattice(1, 64, 40.0);
  SpectralState s = init_packet(c, {{2.0}, 3.0, {0.7}, 1.0});
  evolve(s, 30);
  CHECK(symmetry_test(s, DiscreteSymmetry::P) < 1e-13);
  CHECK(symmetry_test(s, DiscreteSymmetry::T) < 1e-13);
  // Lower bound 2 min E / m = 2 for the C residual.
  CHECK(symmetry_test(s, DiscreteSymmetry::C) >= 2.0);
}

TEST_CASE("results do not depend on the thread budget") {
  LatticeConfig c = lattice(2, 32, 40.0);
  SpectralState s = init_packet(c, {{1.0, -2.0}, 4.0, {0.5, 0.3}, 1.0});
  setenv("NOETHER_THREADS", "1", 1);
  CurrentField one = current_closed_bilinear(s);
  double cont_one = continuity_defect(s);
  setenv("NOETHER_THREADS", "4", 1);
  CurrentField four = current_closed_bilinear(s);
  double cont_four = continuity_defect(s);
  unsetenv("NOETHER_THREADS");
  CHECK(one.J == four.J);
  CHECK(cont_one == cont_four);
}
