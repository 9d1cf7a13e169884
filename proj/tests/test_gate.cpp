#include <doctest.h>

#include "support.hpp"
#include "zeropi/gate.hpp"

using namespace zp;

namespace {

const GateModel& model40() {
  static const GateModel m(test::anchor(), test::small_basis(), 40);
  return m;
}

Mat2c rotation(double angle, double nx, double ny, double nz) {
  Mat2c X, Y, Z;
  X << 0.0, 1.0, 1.0, 0.0;
  Y << 0.0, -kI, kI, 0.0;
  Z << 1.0, 0.0, 0.0, -1.0;
  return std::cos(angle / 2) * Mat2c::Identity() - kI * std::sin(angle / 2) * (nx * X + ny * Y + nz * Z);
}

}  // namespace

TEST_CASE("square gate matches the frozen reference") {
  const auto& ref = test::frozen()["gate_anchor_M40"];
  const GateModel& m = model40();
  PulseSpec ps;
  ps.amplitude = m.eV_of(ref["omega"].get<double>());
  ps.t_gate = ref["t"].get<double>();
  GateResult r = simulate_gate(m, ps);
  CHECK(r.fidelity == doctest::Approx(ref["fidelity"].get<double>()).epsilon(1e-7));
  CHECK(r.distance == doctest::Approx(ref["distance"].get<double>()).epsilon(1e-4));
  CHECK(r.unitarity_defect < 1e-9);
  CHECK(r.hyperbola == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("drive scale follows the gate capacitance") {
  const GateModel& m = model40();
  CircuitParams p = test::anchor();
  CHECK(m.drive_scale() == doctest::Approx(2.0 * p.C_g * p.E_C_theta).epsilon(1e-12));
  CHECK(m.omega_of(m.eV_of(1.3)) == doctest::Approx(1.3));
  CHECK((m.drive() - m.drive().adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rotation angles of X, Z and Hadamard") {
  RotationAngles x = rotation_angles(rotation(kPi, 1, 0, 0));
  CHECK(x.phi_xz == doctest::Approx(0.0));
  CHECK(x.phi_xy == doctest::Approx(0.0));
  CHECK(x.angle == doctest::Approx(kPi));
  CHECK_FALSE(x.far_from_pi);
  RotationAngles z = rotation_angles(std::polar(1.0, 0.4) * rotation(kPi, 0, 0, 1));
  CHECK(z.phi_xz == doctest::Approx(0.5 * kPi));
  const double h = 1.0 / std::sqrt(2.0);
  RotationAngles had = rotation_angles(rotation(kPi, h, 0, h));
  CHECK(had.phi_xz == doctest::Approx(0.25 * kPi));
  RotationAngles y = rotation_angles(rotation(kPi, 0, 1, 0));
  CHECK(y.phi_xy == doctest::Approx(0.5 * kPi));
  RotationAngles half = rotation_angles(rotation(0.5 * kPi, 1, 0, 0));
  CHECK(half.angle == doctest::Approx(0.5 * kPi));
  CHECK(half.far_from_pi);
}

TEST_CASE("closest unitary and fidelity") {
  Mat2c u = rotation(1.1, 0.6, 0.0, 0.8);
  CHECK(average_fidelity(u, u) == doctest::Approx(1.0).epsilon(1e-14));
  Mat2c shrunk = 0.98 * u;
  Mat2c c;
  Eigen::Vector2d s;
  double d = 0.0;
  closest_unitary(shrunk, c, s, d);
  CHECK((c - u).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(d == doctest::Approx(0.02).epsilon(1e-10));
  CHECK(average_fidelity(u, shrunk) < 1.0);
}

TEST_CASE("tanh edges with vanishing width reproduce the square gate") {
  const GateModel& m = model40();
  PulseSpec sq;
  sq.amplitude = m.eV_of(0.5);
  sq.t_gate = 2.0 * kPi;
  PulseSpec th = sq;
  th.shape = PulseShape::tanh;
  th.sigma = 1e-3;
  GateResult a = simulate_gate(m, sq), b = simulate_gate(m, th);
  CHECK(b.fidelity == doctest::Approx(a.fidelity).epsilon(1e-5));
  CHECK((a.u_reduced - b.u_reduced).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("excursion keeps the norm") {
  const GateModel& m = model40();
  PulseSpec ps;
  ps.amplitude = m.eV_of(0.5);
  ps.t_gate = 2.0 * kPi;
  Excursion e = multilevel_excursion(m, ps, 50);
  CHECK(e.max_norm_error < 1e-9);
  CHECK(e.populations.rows() == 50);
  CHECK(e.populations(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("invalid pulses are rejected") {
  PulseSpec ps;
  ps.t_gate = -1.0;
  CHECK_THROWS_AS(ps.validate(), InvalidParameters);
  ps.t_gate = 1.0;
  ps.shape = PulseShape::tanh;
  ps.sigma = -0.1;
  CHECK_THROWS_AS(ps.validate(), InvalidParameters);
}
