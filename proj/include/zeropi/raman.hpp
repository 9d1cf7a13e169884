#pragma once

#include <limits>
#include <string>
#include <vector>

#include "zeropi/circuit.hpp"
#include "zeropi/spectral.hpp"

namespace zp {

// V(t) = V cos(omega t + beta); amplitude is e*V in units of hbar*omega_p.
struct RamanDrive {
  double omega = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
};

struct RamanConfig {
  std::vector<RamanDrive> drives;
  int M = 30;
  std::vector<double> gamma0, gamma1;  // per level j; empty: default_gamma/2 each
  double default_gamma = 1e-6;
  double off_resonance_ratio = 10.0;  // minimum |Delta_ji / Omega_ij|

  double gamma(int j) const;
};

struct RamanRejected : InvalidParameters {
  RamanRejected(const std::string& what, int i_, int j_) : InvalidParameters(what), i(i_), j(j_) {}
  int i, j;  // offending logical level and excited level
};

// Levels w_i (any offset) and the drive table: Omega_ij = ratio * A e^{-i beta} <j|n|i>.
struct RamanSystem {
  VecR levels;
  MatC n;
  double coupling_ratio = 0.0;
};

RamanSystem raman_system(const CircuitParams& p, const BasisSpec& b, Mode mode, int M);

// e*V for which max |Omega_ij| over i < 2 <= j < M equals `rabi`
double amplitude_for_rabi(const RamanSystem& sys, double rabi, int M = 30);

struct EffectiveH {
  Mat2c H;
  double delta_z = 0.0;  // H11 - H00
  double delta_x = 0.0;  // 2 |H01|
  double xy_phase = 0.0;  // arg H01
  double ratio() const { return delta_z != 0.0 ? std::abs(delta_x / delta_z) : std::numeric_limits<double>::infinity(); }
};

// Throws RamanRejected when a drive is too close to a transition i -> j.
void check_off_resonance(const RamanConfig& cfg, const RamanSystem& sys);

EffectiveH effective_h_single(const RamanConfig& cfg, const RamanSystem& sys);

struct CrossTerm {
  double frequency = 0.0;  // omega_k - omega_l, multiplies e^{i f t}
  int k = 0, l = 0;
  Mat2c H;
};

struct TwoToneH {
  EffectiveH static_part;  // k = l terms plus the bare levels
  std::vector<CrossTerm> cross;
};

// Drives with equal frequencies are merged into one complex amplitude first.
TwoToneH effective_h_two_tone(const RamanConfig& cfg, const RamanSystem& sys);

// H_eff(t) = static + sum of cross terms e^{i f t}
Mat2c two_tone_at(const TwoToneH& h, double t);

struct RatioScan {
  std::vector<double> omega;
  std::vector<double> ratio;  // NaN where rejected
  std::vector<bool> admissible;
  double best_omega = 0.0;
  double best_ratio = 0.0;
  int best = -1;
};

// Single tone of amplitude cfg.drives[0] scanned over omega.
RatioScan optimize_ratio(const RamanConfig& cfg, const RamanSystem& sys, const std::vector<double>& omega_grid,
                         int workers = 1);

// 2000 points on [0.02, 1.2]
std::vector<double> default_raman_grid(int points = 2000, double lo = 0.02, double hi = 1.2);

struct PhaseScan {
  std::vector<double> phase;
  std::vector<double> ratio;
  double best_phase = 0.0;
  double best_ratio = 0.0;
};

// Relative phase of the second drive over n uniformly spaced values in [0, 2 pi).
PhaseScan two_tone_phase_scan(const RamanConfig& cfg, const RamanSystem& sys, int n = 64);

struct RamanMapPoint {
  double E_J = 0.0, E_C_theta = 0.0, phi_ext = 0.0;
  bool ok = false;
  std::string error;
  double best_omega = 0.0, best_ratio = 0.0;
};

std::vector<RamanMapPoint> raman_parameter_map(const CircuitParams& base, const std::vector<double>& E_J,
                                               const std::vector<double>& E_C_theta, const BasisSpec& b,
                                               Mode mode, const RamanConfig& cfg,
                                               const std::vector<double>& omega_grid, int workers = 1);

std::vector<RamanMapPoint> raman_flux_scan(const CircuitParams& base, const std::vector<double>& phi_ext,
                                           const BasisSpec& b, Mode mode, const RamanConfig& cfg,
                                           const std::vector<double>& omega_grid, int workers = 1);

}  // namespace zp
