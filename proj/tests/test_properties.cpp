#include <doctest.h>

#include <random>

#include "support.hpp"
#include "zeropi/dispersive.hpp"
#include "zeropi/dynamics.hpp"
#include "zeropi/spectral.hpp"

using namespace zp;

namespace {

std::mt19937& rng() {
  static std::mt19937 r(20261014);
  return r;
}

double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

CircuitParams random_circuit() {
  CircuitParams p = CircuitParams::from_energies(uniform(0.08, 0.25), uniform(5e-4, 3e-3), uniform(1e-4, 5e-4),
                                                 uniform(0.2, 0.4));
  p.dE_J = uniform(-0.05, 0.05);
  p.dC_J = uniform(-0.05, 0.05);
  p.dC = uniform(-0.05, 0.05);
  p.dE_L = uniform(-0.05, 0.05);
  for (int i = 0; i < 4; ++i) {
    p.dC_g[i] = uniform(-0.02, 0.02);
    p.dC_0[i] = uniform(-0.02, 0.02);
  }
  p.phi_ext = uniform(-kPi, kPi);
  p.n_g_theta = uniform(-0.5, 0.5);
  return p;
}

MatC random_hermitian(int n) {
  std::normal_distribution<double> d;
  MatC a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(d(rng()), d(rng()));
  return 0.5 * (a + a.adjoint());
}

BasisSpec compact() {
  BasisSpec b;
  b.n_charge_max = 6;
  b.n_fock_phi = 12;
  b.n_fock_zeta = 3;
  b.n_fock_res = 3;
  b.n_charge_sigma = 1;
  return b;
}

}  // namespace

TEST_CASE("hermiticity over random circuits") {
  for (int k = 0; k < 8; ++k) {
    CircuitParams p = random_circuit();
    ModeSet all{true, true, true};
    OperatorMatrix h = build_h_symm(p, compact(), all) + build_h_asymm(p, compact(), all) +
                       build_h_dcg_dc0(p, compact(), all);
    CHECK(h.hermiticity_defect() < 1e-12);
    ThetaPhiModel m(p, compact());
    SpMatC s = m.to_sparse();
    CHECK(MatC(s - SpMatC(s.adjoint())).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("normal-mode transform is exactly orthogonal") {
  Eigen::Matrix4d T = normal_mode_matrix();
  Eigen::Matrix4d G = T * T.transpose();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(G(i, j) == 0.0);
  Eigen::Vector4d d(0.01, -0.02, 0.03, 0.0);
  CHECK((normal_mode_disorder({0.01, -0.02, 0.03, 0.0}) - T * d).norm() < 1e-16);
}

TEST_CASE("propagators are unitary") {
  for (int k = 0; k < 6; ++k) {
    const int n = 3 + k;
    MatC H0 = random_hermitian(n), D = random_hermitian(n);
    PulseSpec ps;
    ps.amplitude = uniform(0.05, 0.5);
    ps.t_gate = uniform(0.5, 5.0);
    ps.shape = k % 2 ? PulseShape::tanh : PulseShape::square;
    ps.sigma = k % 2 ? 0.1 * ps.t_gate : 0.0;
    ps.carrier_omega = k % 3 == 2 ? uniform(0.5, 2.0) : 0.0;
    Propagation p = propagate_unitary(H0, D, ps);
    CHECK(unitarity_defect(p.U) < 1e-9);
  }
}

TEST_CASE("Lindblad evolution preserves the trace") {
  for (int k = 0; k < 4; ++k) {
    const int n = 3 + k;
    LindbladSpec s;
    s.hamiltonian = random_hermitian(n);
    s.drive.push_back({[](double t) { return 0.2 * std::cos(t); }, random_hermitian(n)});
    for (int c = 0; c < 2; ++c) {
      MatC op = random_hermitian(n) + kI * random_hermitian(n);
      s.collapse.push_back({op, uniform(0.01, 0.2), "c"});
    }
    MatC rho0 = MatC::Zero(n, n);
    rho0(0, 0) = 1.0;
    LindbladOptions o;
    o.dt = 0.002;
    LindbladTrajectory tr = lindblad_propagate(s, rho0, {0.0, 0.5, 1.0}, o);
    CHECK(tr.max_trace_error < 1e-8);
  }
}

TEST_CASE("spectra are periodic in charge offset and flux") {
  for (int k = 0; k < 3; ++k) {
    CircuitParams p = test::anchor();
    p.n_g_theta = uniform(-0.5, 0.5);
    p.phi_ext = uniform(-kPi, kPi);
    p.dE_J = uniform(-0.03, 0.03);
    BasisSpec b;
    b.n_charge_max = 30;
    b.n_fock_phi = 60;
    ThetaPhiModel m0(p, b);
    VecR e0 = diagonalize(m0, 4).eigenvalues;
    CircuitParams q = p;
    q.n_g_theta += 1.0;
    VecR e1 = diagonalize(ThetaPhiModel(q, b), 4).eigenvalues;
    q = p;
    q.phi_ext += 2.0 * kPi;
    VecR e2 = diagonalize(ThetaPhiModel(q, b), 4).eigenvalues;
    for (int i = 0; i < 4; ++i) {
      CHECK(test::rel(e1(i), e0(i)) < 1e-8);
      CHECK(test::rel(e2(i), e0(i)) < 1e-8);
    }
  }
}

TEST_CASE("dispersive two-level oracle over random parameters") {
  for (int k = 0; k < 50; ++k) {
    const double wq = uniform(0.05, 0.5), g = uniform(1e-4, 2e-3);
    double wr = uniform(0.02, 0.6);
    if (std::abs(wq - wr) < 20.0 * g) wr = wq + 0.1;
    MatC gt = MatC::Zero(2, 2);
    gt(0, 1) = std::polar(g, uniform(0.0, 2.0 * kPi));
    gt(1, 0) = std::conj(gt(0, 1));
    VecR levels(2);
    levels << 0.0, wq;
    DispersiveResult r = dispersive_shifts(gt, levels, wr);
    const double expected = g * g / (wq - wr) + g * g / (wq + wr);
    CHECK(std::abs(r.chi_qubit - expected) <= 1e-10 * std::abs(expected));
  }
}
