#pragma once

#include <array>
#include <string>

#include "zeropi/types.hpp"

namespace zp {

// Circuit energies are in units of hbar*omega_p.  Capacitances use the
// convention E_C = 1/C (e^2/2 = 1).  C and C_J are derived from the charging
// energies and C_g, C_0 by sync_capacitances().
struct CircuitParams {
  double E_J = 0.165;
  double E_L = 1e-3;
  double E_C_theta = 1.75e-4;
  double E_C_phi = 0.378;
  double omega_p_over_2pi = 4.0e10;

  double dE_J = 0.0;
  double dE_L = 0.0;
  double dC = 0.0;
  double dC_J = 0.0;

  double C = 0.0;
  double C_J = 0.0;
  double C_g = 0.1;
  double C_0 = 0.1;
  std::array<double, 4> dC_g{};  // node 1..4
  std::array<double, 4> dC_0{};

  double phi_ext = 0.0;
  double n_g_theta = 0.0;

  static CircuitParams from_energies(double E_J, double E_L, double E_C_theta, double E_C_phi,
                                     double C_g = 0.1, double C_0 = 0.1);
  void sync_capacitances();
  void validate() const;
  bool has_disorder() const;
  bool has_zeta_disorder() const { return dC != 0.0 || dE_L != 0.0; }
  bool has_gate_ground_disorder() const;
};

struct ModeCapacitances {
  double phi, theta, zeta, sigma;
};

// C_phi = C_0+C_g+2C_J, C_theta = C_0+C_g+2(C+C_J), C_zeta = C_0+C_g+2C, C_Sigma = C_0+C_g
ModeCapacitances mode_capacitances(const CircuitParams& p);

// Rows: phi, theta, zeta, Sigma.  Columns: node 1..4.
Eigen::Matrix4d normal_mode_matrix();
Eigen::Vector4d node_to_normal(const Eigen::Vector4d& node_values);

// 4x4 nodal capacitance matrix of the disordered circuit.  Junction
// capacitances sit on node pairs (1,2),(3,4), the shunt capacitors on (1,3),(2,4).
// dC_J = (C_J12 - C_J34)/C_J, dC = (C_24 - C_13)/C.
Eigen::Matrix4d node_capacitance_matrix(const CircuitParams& p);

struct RegimeReport {
  double Z_phi_over_RQ;
  double Z_theta_over_RQ;
  bool zero_pi_regime;  // Z_theta < R_Q < Z_phi
};

RegimeReport impedances(const CircuitParams& p);

// Oscillator frequency of the zeta mode, 4 sqrt(E_C_zeta E_L).
double zeta_frequency(const CircuitParams& p);

struct BasisSpec {
  int n_charge_max = 30;
  int n_fock_phi = 40;
  int n_fock_zeta = 10;
  int n_fock_res = 6;
  int n_charge_sigma = 3;
  double convergence_tol = 1e-8;
  Index dimension_limit = 4'000'000;

  int charge_dim() const { return 2 * n_charge_max + 1; }
  void validate() const;
};

enum class Mode { phi, theta, zeta, sigma };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode m);

}  // namespace zp
