#include <doctest.h>

#include "support.hpp"
#include "zeropi/config.hpp"
#include "zeropi/cooling.hpp"

using namespace zp;

namespace {

CoolingConfig desk() {
  const auto& c = test::frozen()["cooling_desk"]["config"];
  CoolingConfig k;
  k.omega_b_bar = c["wb"];
  k.epsilon = c["eps"];
  k.omega_zeta = c["wz"];
  k.kappa_b = c["kb"];
  k.n_th = c["nth"];
  k.g_bar = c["g"];
  k.omega_m = c["wm"];
  k.kappa_zeta = c["kz"];
  return k;
}

CoolingSweepPoint trend_point(double z, double ratio) {
  CoolingSweepPoint p;
  p.ok = true;
  p.Z_phi_over_RQ = z;
  p.T_ratio = ratio;
  return p;
}

}  // namespace

TEST_CASE("sideband rates match the independent reference") {
  const auto& ref = test::frozen()["cooling_desk"];
  SidebandRates s = sideband_rates(desk(), true);
  CHECK(s.g_prime == doctest::Approx(ref["g_prime"].get<double>()).epsilon(1e-12));
  CHECK(s.gamma_down == doctest::Approx(ref["gamma_down"].get<double>()).epsilon(1e-12));
  CHECK(s.gamma_up == doctest::Approx(ref["gamma_up"].get<double>()).epsilon(1e-12));
  CHECK(s.gamma_down_full == doctest::Approx(ref["gamma_down_full"].get<double>()).epsilon(1e-10));
  CHECK(s.gamma_up_full == doctest::Approx(ref["gamma_up_full"].get<double>()).epsilon(1e-10));
  CoolingResult r = cooling_analysis(desk());
  CHECK(r.n_ss == doctest::Approx(ref["n_ss"].get<double>()).epsilon(1e-12));
}

TEST_CASE("no coupling or no modulation means no cooling") {
  CoolingConfig c = desk();
  c.g_bar = 0.0;
  CoolingResult r = cooling_analysis(c, true);
  CHECK(r.g_prime == 0.0);
  CHECK(r.gamma_down == 0.0);
  CHECK(r.n_ss == doctest::Approx(c.n_th).epsilon(1e-14));
  c = desk();
  c.epsilon = 0.0;
  SidebandRates s = sideband_rates(c, false);
  CHECK(s.g_prime == 0.0);
  CHECK(cooling_analysis(c).n_ss == doctest::Approx(c.n_th).epsilon(1e-14));
}

TEST_CASE("bad-cavity flag") {
  CoolingConfig c = desk();
  double gp = effective_coupling(c);
  c.kappa_b = 2.0 * gp;
  CHECK_FALSE(cooling_analysis(c).validity.bad_cavity);
  c.kappa_b = 20.0 * gp;
  CHECK(cooling_analysis(c).validity.bad_cavity);
}

TEST_CASE("red sideband rate peaks at the corrected modulation frequency") {
  CoolingConfig c = desk();
  c.chi0_zeta = 2e-3;
  c.chi1_zeta = 6e-3;
  c.kerr_K = 1e-3;
  c.epsilon = 0.05;
  c.kappa_b = 2e-3;
  c.g_bar = 1e-4;
  const double target = c.omega_b_bar - c.omega_zeta + 0.5 * (c.chi0_zeta + c.chi1_zeta) + 0.5 * c.kerr_K;
  double best = 0.0, best_wm = 0.0;
  for (int k = -200; k <= 200; ++k) {
    c.omega_m = target + 1e-5 * k;
    double g = sideband_rates(c, true).gamma_down_full;
    if (g > best) {
      best = g;
      best_wm = c.omega_m;
    }
  }
  CHECK(std::abs(best_wm - target) <= 2e-5);
  c.omega_m = target;
  CHECK(c.modulation() == doctest::Approx(c.omega_b_bar - c.omega_zeta).epsilon(1e-14));
}

TEST_CASE("simplified and full sums agree in the validity regime") {
  CoolingConfig c;
  c.omega_b_bar = 1.0;
  c.epsilon = 0.5;
  c.omega_zeta = 0.01;
  c.kappa_b = 0.04;
  c.g_bar = 1e-3;
  c.n_th = 1.0;
  SidebandRates s = sideband_rates(c, true);
  CHECK(std::abs(s.gamma_down_full / s.gamma_down - 1.0) < 0.05);
  CHECK(std::abs(s.gamma_up_full / s.gamma_up - 1.0) < 0.05);
  CHECK(s.tail_bound < 0.01 * s.gamma_up_full);
}

TEST_CASE("steady population and dephasing") {
  SteadyPopulation s = steady_state_population(1e-4, 2.0, 1e-3, 1e-5);
  CHECK(s.gamma_cooling == doctest::Approx(1e-4 + 1e-3 - 1e-5));
  CHECK(s.n_ss == doctest::Approx((2e-4 + 1e-5) / s.gamma_cooling));
  CHECK(shot_noise_dephasing(1e-5, 0.5, 1e-3) == doctest::Approx(4e-10 * 0.75 / 1e-3));
  CHECK_THROWS_AS(steady_state_population(0.0, 1.0, 1e-5, 1e-3), InvalidParameters);
}

TEST_CASE("LC coupling from capacitances") {
  double g = coupling_from_capacitances(2.0, 100.0, 50.0, 0.01, 0.1);
  CHECK(g == doctest::Approx(8.0 * 2.0 / 5000.0 * std::sqrt(0.01 * 100.0 / 16.0) * std::sqrt(0.1 * 50.0 / 16.0)));
}

TEST_CASE("trend classification") {
  std::vector<CoolingSweepPoint> rising{trend_point(1, 10), trend_point(2, 40), trend_point(3, 60), trend_point(4, 65)};
  TrendReport t = cooling_trend(rising);
  CHECK(t.non_decreasing);
  CHECK(t.saturating);
  CHECK(t.min_ratio == 10);
  CHECK(t.max_ratio == 65);
  std::vector<CoolingSweepPoint> linear{trend_point(1, 10), trend_point(2, 20), trend_point(3, 30)};
  CHECK_FALSE(cooling_trend(linear).saturating);
  std::vector<CoolingSweepPoint> dip{trend_point(1, 10), trend_point(2, 8), trend_point(3, 30)};
  CHECK_FALSE(cooling_trend(dip).non_decreasing);
}

TEST_CASE("two-mode master equation reproduces the reference integration") {
  const auto& ref = test::frozen()["cooling_desk"];
  FullMEReport r = validate_full_vs_reduced(desk());
  CHECK(r.max_trace_error < 1e-8);
  CHECK(r.n_full == doctest::Approx(ref["n_me_Na12_Nb3"].get<double>()).epsilon(1e-3));
  CHECK(r.relative_discrepancy < 0.1);
}

TEST_CASE("cooling ratio saturates in the high-temperature limit") {
  RunConfig c = load_config("fig10", "", {});
  CoolingSweepSetup s = c.cooling.setup;
  s.E_L = {1.25e-4};
  s.n_th_scale = 30.0;
  auto a = cooling_sweep(c.circuit, c.basis, s, 1);
  s.n_th_scale = 60.0;
  auto b = cooling_sweep(c.circuit, c.basis, s, 1);
  REQUIRE(a[0].ok);
  REQUIRE(b[0].ok);
  CHECK(a[0].cooled.n_th > 100.0);
  CHECK(std::abs(b[0].T_ratio / a[0].T_ratio - 1.0) < 0.05);
}
