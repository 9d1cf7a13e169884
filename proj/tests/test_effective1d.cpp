#include <doctest.h>

#include "support.hpp"
#include "zeropi/effective1d.hpp"
#include "zeropi/spectral.hpp"

using namespace zp;

namespace {

const EffectiveModelFit& anchor_fit() {
  static const EffectiveModelFit f =
      fit_coefficients(test::anchor(), {0.0, 0.25 * kPi, 0.5 * kPi, 0.75 * kPi, kPi});
  return f;
}

}  // namespace

TEST_CASE("anchor coefficients against the independent reference") {
  const auto& ref = test::frozen()["bo_anchor_N300"];
  const auto& f = anchor_fit();
  CHECK(f.E_alpha == doctest::Approx(ref["E_alpha"].get<double>()).epsilon(1e-6));
  CHECK(f.E_gamma == doctest::Approx(ref["E_gamma"].get<double>()).epsilon(1e-4));
  CHECK(f.E_beta == doctest::Approx(ref["E_beta"].get<double>()).epsilon(1e-2));
  CHECK(f.residual / f.E_alpha < 1e-3);
  CHECK_FALSE(f.ansatz_warning);
}

TEST_CASE("flux dependence reconstructs held-out coefficients") {
  const auto& f = anchor_fit();
  CircuitParams p = test::anchor();
  VecR th = theta_grid(f.theta_points);
  for (double held : {0.1 * kPi, 0.37 * kPi, 0.9 * kPi}) {
    FourierFit h = fourier_project(bo_ground_energy(p, th, held, auto_fock_phi(p)), 4);
    const double bound = 2.0 * f.flux_residual + 1e-14;
    CHECK(std::abs(-h.a(1) - f.E2_at(held)) <= bound);
    CHECK(std::abs(-h.a(0) - f.E1_at(held)) <= bound);
    CHECK(std::abs(h.c0 - (f.c_alpha + f.c_beta * std::cos(held))) <= bound);
    CHECK(h.residual <= 2.0 * f.residual);
  }
}

TEST_CASE("Fourier projection recovers synthetic harmonics") {
  BoCurve c;
  c.theta = theta_grid(81);
  c.energy.resize(c.theta.size());
  for (Index k = 0; k < c.theta.size(); ++k) {
    double t = c.theta(k);
    c.energy(k) = 0.5 - 0.02 * std::cos(2 * t) - 3e-5 * std::cos(t) + 1e-6 * std::sin(3 * t);
  }
  FourierFit f = fourier_project(c, 4);
  CHECK(f.c0 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.a(1) == doctest::Approx(-0.02).epsilon(1e-12));
  CHECK(f.a(0) == doctest::Approx(-3e-5).epsilon(1e-10));
  CHECK(f.b(2) == doctest::Approx(1e-6).epsilon(1e-8));
  CHECK(f.residual < 1e-14);
  CHECK(high_harmonic_weight(c) < 1e-14);
}

TEST_CASE("1D Hamiltonian is Hermitian and periodic in the offset charge") {
  CircuitParams p = test::anchor();
  const auto& f = anchor_fit();
  OperatorMatrix h = build_1d_hamiltonian(f.fits[0], p, 40);
  CHECK(h.hermiticity_defect() < 1e-12);
  Spectrum s0 = diagonalize(h, 6);
  p.n_g_theta = 1.0;
  Spectrum s1 = diagonalize(build_1d_hamiltonian(f.fits[0], p, 40), 6);
  for (int i = 0; i < 6; ++i) CHECK(s0.eigenvalues(i) == doctest::Approx(s1.eigenvalues(i)).epsilon(1e-8));
}

TEST_CASE("bad grids and poor fits are rejected") {
  CircuitParams p = test::anchor();
  CHECK_THROWS_AS(fit_coefficients(p, {0.0}), InvalidParameters);
  CHECK_THROWS_AS(fit_coefficients(p, {0.1, 0.2, 0.3, 0.4, 0.5}), InvalidParameters);
  FitOptions o;
  o.n_fock_phi = 40;
  o.theta_points = 33;
  o.accept_ratio = 1e-12;
  CHECK_THROWS_AS(fit_coefficients(p, {0.0, 0.25 * kPi, 0.5 * kPi, 0.75 * kPi, kPi}, o), FitRejected);
}

TEST_CASE("Fock size follows the oscillator length") {
  CircuitParams p = test::anchor();
  CHECK(auto_fock_phi(p) == 300);
  p.E_L = 2.5e-4;
  CHECK(auto_fock_phi(p) == 600);
  p.E_L = 5e-3;
  CHECK(auto_fock_phi(p) == 300);
}
