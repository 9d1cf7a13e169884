#pragma once

#include <vector>

#include "zeropi/circuit.hpp"
#include "zeropi/spectral.hpp"

namespace zp {

using MatB = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct DispersiveResult {
  double omega_r = 0.0;
  MatC g;        // g_ij
  MatR delta;    // Delta_ij = (w_i - w_j) - w_r
  MatR chi_ij;   // |g_ij|^2 / Delta_ij, zero where invalid
  MatB validity;
  VecR chi_levels;
  VecR lambda_levels;
  double chi_qubit = 0.0;
  double omega_q_tilde = 0.0;
  double omega_r_tilde = 0.0;
  int invalid_pairs = 0;
  bool qubit_valid = true;  // no invalid pair touches levels 0 or 1
};

// g_ij = ratio * eV_rms * <i|n|j>
MatC coupling_table(const MatC& n_table, double coupling_ratio, double eV_rms);

// Coupling of mode theta or phi computed on the theta-phi model.  A
// non-positive coupling_ratio selects C_g / C_mu from the circuit.
MatC coupling_table(const CircuitParams& p, Mode mode, double eV_rms, const ThetaPhiModel& m,
                    const Spectrum& s, int M, double coupling_ratio = 0.0);

DispersiveResult dispersive_shifts(const MatC& g, const VecR& levels, double omega_r,
                                   double n_bar = 0.0, double ratio_threshold = 10.0);

struct StraddlingScan {
  std::vector<double> omega_r;
  std::vector<double> chi;
  std::vector<double> chi_0, chi_1;
  std::vector<bool> valid;
  int best = -1;  // argmax |chi| over valid points
};

StraddlingScan straddling_scan(const MatC& g, const VecR& levels, const std::vector<double>& grid,
                               double n_bar = 0.0, double ratio_threshold = 10.0, int workers = 1);

struct DispersiveSetup {
  Mode mode = Mode::phi;
  double eV_rms = 0.0;
  double coupling_ratio = 0.0;
  int M = 30;
  double n_bar = 0.0;
  double ratio_threshold = 10.0;
};

struct DispersiveModel {
  VecR levels;  // relative to the ground state
  MatC g;
  bool weak_coupling_warning = false;  // C_g/C_mu above 0.3
};

DispersiveModel dispersive_model(const CircuitParams& p, const BasisSpec& b,
                                 const DispersiveSetup& setup);

}  // namespace zp
