#pragma once

#include <string>
#include <vector>

#include "zeropi/circuit.hpp"
#include "zeropi/dispersive.hpp"

namespace zp {

// Angular frequencies in omega_p units, temperature in kelvin.
struct CoolingConfig {
  double omega_zeta = 0.0;
  double omega_b_bar = 0.125;
  double epsilon = 0.005;
  double omega_m = 0.0;  // 0: omega_b_bar - omega_zeta, then corrected
  double g_bar = 0.0;
  double kappa_b = 2.5e-5;
  double kappa_zeta = 0.0;
  double temperature = 0.015;
  double n_th = -1.0;  // < 0: Bose-Einstein at omega_zeta and temperature
  double chi0_zeta = 0.0, chi1_zeta = 0.0;
  double kerr_K = 0.0;
  double omega_p_over_2pi = 4.0e10;

  double thermal_occupation() const;
  double modulation() const;  // omega_m actually applied
  void validate() const;
};

struct CoolingValidity {
  bool weak_coupling = true;     // g_bar / min(omega_zeta, omega_b) <= 0.1
  bool bad_cavity = true;        // kappa_b / g' >= 10
  bool cold_b_mode = true;       // hbar omega_b / k_B T >= 5
  bool slow_dispersive = true;   // chi_01 / gamma_cooling <= 0.1
  bool tail_ok = true;           // Bessel tail below 1% of the sums
  bool all() const { return weak_coupling && bad_cavity && cold_b_mode && slow_dispersive && tail_ok; }
  std::vector<std::string> warnings() const;
};

struct SidebandRates {
  double g_prime = 0.0;
  double gamma_down = 0.0, gamma_up = 0.0;            // simplified forms
  double gamma_down_full = 0.0, gamma_up_full = 0.0;  // Bessel sums
  double tail_bound = 0.0;
  int n_max = 50;
};

struct CoolingResult {
  double g_prime = 0.0, gamma_down = 0.0, gamma_up = 0.0, gamma_cooling = 0.0;
  double n_th = 0.0;
  double n_ss = 0.0;
  double Gamma_phi_SN = 0.0, T_phi_SN = 0.0;
  double purcell_factor = 0.0;  // gamma_cooling / kappa_zeta
  CoolingValidity validity;
};

double effective_coupling(const CoolingConfig& c);

// g_bar = 8 C_g/(C_zeta C_b) n_zpf,zeta n_zpf,b for two LC modes
double coupling_from_capacitances(double C_g, double C_zeta, double C_b, double omega_zeta, double omega_b);

// Full sums are evaluated for |n| <= n_max; throws NumericalError when the tail
// bound exceeds 1% of either sum.
SidebandRates sideband_rates(const CoolingConfig& c, bool full = true, int n_max = 50);

struct SteadyPopulation {
  double n_ss = 0.0;
  double gamma_cooling = 0.0;
};

SteadyPopulation steady_state_population(double kappa_zeta, double n_th, double gamma_down, double gamma_up);

// 4 chi^2 n (n+1) / gamma with chi = (chi1 - chi0)/2
double shot_noise_dephasing(double chi01, double n_ss, double gamma_cooling);

double modulation_correction(double omega_m, double chi0, double chi1, double kerr_K);

CoolingResult cooling_analysis(const CoolingConfig& c, bool full_sums = false);

struct FullMEOptions {
  int n_zeta = 12;
  int n_b = 3;
  double dt = 0.05;
  double t_max = 0.0;       // 0: 8 / gamma_cooling
  double average_periods = 5.0;
  int samples = 200;        // stored trajectory points
};

struct FullMEReport {
  double n_full = 0.0;      // time average over the last periods
  double n_reduced = 0.0;   // reduced-model steady state
  double relative_discrepancy = 0.0;
  double max_trajectory_discrepancy = 0.0;  // |n_full(t) - n_red(t)| / n_th
  double max_b_occupation = 0.0;
  double max_trace_error = 0.0;
  bool near_vacuum = true;  // b occupation stays below 0.1
  bool valid = true;        // near_vacuum and the rate assumptions hold
  std::vector<double> t, n_zeta_t, n_reduced_t, n_b_t;
};

// Integrates the two-mode model with modulated omega_b(t), g(t) from a
// thermal zeta state and b vacuum.
FullMEReport validate_full_vs_reduced(const CoolingConfig& c, const FullMEOptions& opt = {});

// zeta-mode couplings from dC and dE_L: g_ij = A <i|n_theta|j> + B <i|phi|j>
MatC zeta_coupling_table(const CircuitParams& p, const ThetaPhiModel& m, const Spectrum& s, int M);

struct ZetaDispersive {
  double omega_zeta = 0.0;
  double chi0 = 0.0, chi1 = 0.0, chi01 = 0.0;  // chi01 = (chi1 - chi0)/2
  bool qubit_valid = true;
};

ZetaDispersive zeta_dispersive(const CircuitParams& p, const BasisSpec& b, int M = 20);

struct CoolingSweepSetup {
  std::vector<double> E_L;
  double C_g_b = 17.5;   // coupling capacitance to the b mode
  double C_b = 500.0;
  double Q_zeta = 30000.0;
  CoolingConfig base;    // omega_b_bar, epsilon, kappa_b, temperature, kerr_K
  int M = 20;
  double n_th_scale = 1.0;  // multiplies the thermal occupation
};

struct CoolingSweepPoint {
  double E_L = 0.0, Z_phi_over_RQ = 0.0;
  bool ok = false;
  std::string error;
  double omega_zeta = 0.0, g_bar = 0.0, kappa_zeta = 0.0;
  ZetaDispersive chi;
  CoolingResult cooled, uncooled;
  double T_ratio = 0.0;  // cooled / uncooled T_phi^SN
};

std::vector<CoolingSweepPoint> cooling_sweep(const CircuitParams& base, const BasisSpec& b,
                                             const CoolingSweepSetup& setup, int workers = 1);

// Ordered by Z_phi/R_Q: non-decreasing (relative slack 1e-9); saturating when
// the slope d ratio / dZ of the last interval is at most `slope_fraction`
// times the steepest interval.
struct TrendReport {
  bool non_decreasing = false;
  bool saturating = false;
  double min_ratio = 0.0, max_ratio = 0.0;
  double max_slope = 0.0, last_slope = 0.0;
};

TrendReport cooling_trend(const std::vector<CoolingSweepPoint>& pts, double slope_fraction = 0.5);

}  // namespace zp
