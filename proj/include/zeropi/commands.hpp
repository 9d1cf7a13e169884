#pragma once

#include <string>
#include <vector>

#include "zeropi/config.hpp"
#include "zeropi/output.hpp"

namespace zp {

// BO fit at one circuit point plus the 1D model built from it.
struct BoPoint {
  double value = 0.0;  // sweep coordinate
  bool ok = false;
  std::string error;
  double Z_phi_over_RQ = 0.0;
  EffectiveModelFit fit;
  VecR levels_1d, levels_2d;  // relative to the ground state
  std::vector<double> split_1d, split_2d;
  double gap_estimate = 0.0;  // sqrt(32 E_C_theta E_alpha)
  double gap_1d = 0.0, gap_2d = 0.0;  // doublet 0 -> doublet 1 (mean energies)
};

// H_theta = 4 E_C_theta n^2 - E_2 cos 2theta - E_1 cos theta at the circuit flux
OperatorMatrix effective_theta_hamiltonian(const EffectiveModelFit& fit, const CircuitParams& p, int n_charge_max);

BoPoint bo_point(const CircuitParams& p, const BasisSpec& b, const BoFitSection& s, int workers);

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  int points = 0;
};

// least squares of log|y| against log x over positive pairs
LineFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

struct MonotoneReport {
  bool monotone = false;     // phi_xz non-increasing in E_J and non-decreasing in E_C_theta
  bool spans_x_to_z = false; // corner values below 0.1 and above pi/2 - 0.3
  double x_corner = 0.0, z_corner = 0.0;
  int failed_points = 0;
  int violations = 0;
};

// points in gate_parameter_map order (E_J major)
MonotoneReport xz_monotone(const std::vector<GateMapPoint>& pts, std::size_t n_E_J, std::size_t n_E_C, double tol);

// Runs cfg.command and writes its outputs.  Throws ConfigError, InvalidParameters
// or NumericalError on failure.
void run_command(const RunConfig& cfg);

}  // namespace zp
