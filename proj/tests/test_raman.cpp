#include <doctest.h>

#include "support.hpp"
#include "zeropi/dynamics.hpp"
#include "zeropi/raman.hpp"

using namespace zp;

namespace {

// levels 0, w1, w2 with charge elements only between the logical pair and level 2
RamanSystem three_level(double w1, double w2, cplx n20, cplx n21) {
  RamanSystem s;
  s.levels = VecR(3);
  s.levels << 0.0, w1, w2;
  s.n = MatC::Zero(3, 3);
  s.n(2, 0) = n20;
  s.n(0, 2) = std::conj(n20);
  s.n(2, 1) = n21;
  s.n(1, 2) = std::conj(n21);
  s.coupling_ratio = 0.25;
  return s;
}

RamanConfig single(double omega, double amp, double phase = 0.0, double gamma = 0.0) {
  RamanConfig c;
  c.M = 3;
  c.default_gamma = gamma;
  c.drives = {{omega, amp, phase}};
  return c;
}

}  // namespace

TEST_CASE("three-level closed form") {
  RamanSystem s = three_level(1e-3, 0.6, cplx(0.7, 0.2), cplx(-0.1, 0.5));
  const double w = 0.35, A = 4e-3, beta = 0.3;
  EffectiveH e = effective_h_single(single(w, A, beta), s);
  cplx O02 = s.coupling_ratio * A * std::polar(1.0, -beta) * s.n(2, 0);
  cplx O12 = s.coupling_ratio * A * std::polar(1.0, -beta) * s.n(2, 1);
  double d20 = 0.6 - w, d21 = 0.6 - 1e-3 - w;
  cplx h01 = -0.5 * std::conj(O02) * O12 * (1.0 / d20 + 1.0 / d21);
  double h00 = -std::norm(O02) / d20;
  double h11 = 1e-3 - std::norm(O12) / d21;
  CHECK(std::abs(e.H(0, 1) - h01) < 1e-10 * std::abs(h01));
  CHECK(std::abs(e.H(0, 0).real() - h00) < 1e-10 * std::abs(h00));
  CHECK(std::abs(e.H(1, 1).real() - h11) < 1e-10 * std::abs(h11));
  CHECK(e.delta_x == doctest::Approx(2.0 * std::abs(h01)).epsilon(1e-12));
  CHECK(e.delta_z == doctest::Approx(h11 - h00).epsilon(1e-12));
  CHECK(e.ratio() == doctest::Approx(2.0 * std::abs(h01) / std::abs(h11 - h00)).epsilon(1e-12));
}

TEST_CASE("effective Hamiltonian is Hermitian for any linewidth") {
  RamanSystem s = three_level(1e-3, 0.6, cplx(0.7, 0.2), cplx(-0.1, 0.5));
  for (double g : {0.0, 1e-6, 1e-3, 0.05}) {
    EffectiveH e = effective_h_single(single(0.35, 4e-3, 0.2, g), s);
    CHECK((e.H - e.H.adjoint()).cwiseAbs().maxCoeff() < 1e-16);
  }
  EffectiveH a = effective_h_single(single(0.35, 4e-3, 0.2, 1e-12), s);
  EffectiveH b = effective_h_single(single(0.35, 4e-3, 0.2, 0.0), s);
  CHECK((a.H - b.H).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("drives near a transition are rejected") {
  RamanSystem s = three_level(1e-3, 0.6, 0.7, 0.5);
  CHECK_THROWS_AS(effective_h_single(single(0.6, 4e-3), s), RamanRejected);
  RatioScan scan = optimize_ratio(single(0.0, 4e-3), s, {0.3, 0.6, 0.599, 0.2});
  CHECK(scan.admissible[0]);
  CHECK_FALSE(scan.admissible[1]);
  CHECK(std::isnan(scan.ratio[1]));
  CHECK(scan.best >= 0);
}

TEST_CASE("rabi scale sets the amplitude") {
  RamanSystem s = three_level(1e-3, 0.6, 0.7, cplx(0.0, 0.9));
  double A = amplitude_for_rabi(s, 1e-4, 3);
  CHECK(s.coupling_ratio * A * 0.9 == doctest::Approx(1e-4).epsilon(1e-14));
}

TEST_CASE("two-tone reductions") {
  RamanSystem s = three_level(1e-3, 0.6, cplx(0.7, 0.2), cplx(-0.1, 0.5));
  RamanConfig c = single(0.35, 4e-3, 0.3);
  EffectiveH one = effective_h_single(c, s);

  RamanConfig zero = c;
  zero.drives.push_back({0.2, 0.0, 1.0});
  TwoToneH z = effective_h_two_tone(zero, s);
  CHECK((z.static_part.H - one.H).cwiseAbs().maxCoeff() < 1e-16);
  for (const auto& x : z.cross) CHECK(x.H.cwiseAbs().maxCoeff() == 0.0);

  RamanConfig same = single(0.35, 1.5e-3, 0.3);
  same.drives.push_back({0.35, 2.5e-3, 0.3});
  TwoToneH m = effective_h_two_tone(same, s);
  CHECK(m.cross.empty());
  CHECK((m.static_part.H - one.H).cwiseAbs().maxCoeff() < 1e-15);

  RamanConfig two = single(0.35, 2e-3, 0.0);
  two.drives.push_back({0.3, 1e-3, 0.5});
  TwoToneH t = effective_h_two_tone(two, s);
  REQUIRE(t.cross.size() == 2);
  Mat2c h = two_tone_at(t, 17.0);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  PhaseScan ps = two_tone_phase_scan(two, s, 16);
  CHECK(ps.phase.size() == 16);
}

TEST_CASE("effective dynamics follows the full three-level evolution") {
  const double w = 0.4;
  RamanSystem s = three_level(2.5e-5, 0.5, 0.01, cplx(0.0, 0.008));
  RamanConfig c = single(w, 1.0);
  s.coupling_ratio = 0.25;
  EffectiveH e = effective_h_single(c, s);

  const cplx O02 = s.coupling_ratio * s.n(2, 0), O12 = s.coupling_ratio * s.n(2, 1);
  MatC H = MatC::Zero(3, 3);
  H(0, 0) = 0.0;
  H(1, 1) = 2.5e-5;
  H(2, 2) = 0.5 - w;
  H(2, 0) = O02;
  H(0, 2) = std::conj(O02);
  H(2, 1) = O12;
  H(1, 2) = std::conj(O12);
  MatC He = e.H;

  double worst = 0.0, peak = 0.0;
  for (double t = 0.0; t <= 8e4; t += 2000.0) {
    VecC full = expm_hermitian(H, t).col(0);
    VecC eff = expm_hermitian(He, t).col(0);
    worst = std::max(worst, std::abs(std::norm(full(1)) - std::norm(eff(1))));
    peak = std::max(peak, std::norm(eff(1)));
  }
  CHECK(peak > 0.3);
  CHECK(worst < 0.01);
}
