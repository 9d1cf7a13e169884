#include <doctest.h>

#include "support.hpp"
#include "zeropi/dispersive.hpp"

using namespace zp;

TEST_CASE("two-level dispersive shift matches the closed form") {
  const double wq = 0.3, wr = 0.21, g = 1.7e-3;
  MatC n(2, 2);
  n << 0.0, cplx(0.0, 1.0), cplx(0.0, -1.0), 0.0;
  MatC gt = coupling_table(n, 0.5, 2.0 * g);
  CHECK(std::abs(gt(0, 1)) == doctest::Approx(g).epsilon(1e-14));
  VecR levels(2);
  levels << 0.0, wq;
  DispersiveResult r = dispersive_shifts(gt, levels, wr);
  const double expected = g * g / (wq - wr) + g * g / (wq + wr);
  CHECK(std::abs(r.chi_qubit - expected) < 1e-10 * std::abs(expected));
  CHECK(r.chi_levels(0) == doctest::Approx(-expected).epsilon(1e-10));
  CHECK(r.chi_levels(1) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(r.qubit_valid);
  CHECK(r.invalid_pairs == 0);
  CHECK(r.delta(1, 0) == doctest::Approx(wq - wr).epsilon(1e-15));
}

TEST_CASE("near-resonant pairs are flagged and excluded") {
  MatC gt = MatC::Zero(2, 2);
  gt(0, 1) = gt(1, 0) = 1e-2;
  VecR levels(2);
  levels << 0.0, 0.3;
  DispersiveResult r = dispersive_shifts(gt, levels, 0.25);
  CHECK_FALSE(r.validity(1, 0));
  CHECK(r.chi_ij(1, 0) == 0.0);
  CHECK_FALSE(r.qubit_valid);
}

TEST_CASE("zero drive gives zero shifts") {
  DispersiveSetup s;
  s.mode = Mode::phi;
  s.eV_rms = 0.0;
  s.M = 8;
  BasisSpec b = test::small_basis();
  b.n_charge_max = 10;
  b.n_fock_phi = 60;
  DispersiveModel m = dispersive_model(test::anchor(), b, s);
  CHECK(m.g.cwiseAbs().maxCoeff() == 0.0);
  DispersiveResult r = dispersive_shifts(m.g, m.levels, 0.1);
  CHECK(r.chi_levels.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.chi_qubit == 0.0);
}

TEST_CASE("coupling table is Hermitian and scales linearly") {
  DispersiveSetup s;
  s.mode = Mode::phi;
  s.eV_rms = 5e-3;
  s.coupling_ratio = 0.2;
  s.M = 10;
  BasisSpec b = test::small_basis();
  b.n_charge_max = 10;
  b.n_fock_phi = 60;
  DispersiveModel m = dispersive_model(test::anchor(), b, s);
  CHECK((m.g - m.g.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  s.eV_rms = 1e-2;
  DispersiveModel m2 = dispersive_model(test::anchor(), b, s);
  CHECK((m2.g - 2.0 * m.g).cwiseAbs().maxCoeff() < 1e-12 * m.g.cwiseAbs().maxCoeff());
}

TEST_CASE("straddling scan picks the largest valid shift") {
  MatC gt = MatC::Zero(3, 3);
  gt(0, 2) = gt(2, 0) = 1e-3;
  gt(1, 2) = gt(2, 1) = 2e-3;
  VecR levels(3);
  levels << 0.0, 0.01, 0.5;
  std::vector<double> grid{0.1, 0.2, 0.3, 0.45};
  StraddlingScan s = straddling_scan(gt, levels, grid);
  REQUIRE(s.best >= 0);
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (s.valid[k]) CHECK(std::abs(s.chi[k]) <= std::abs(s.chi[s.best]));
  CHECK(s.omega_r[s.best] == 0.45);
}
