#include "zeropi/circuit.hpp"

#include <cmath>

namespace zp {

CircuitParams CircuitParams::from_energies(double E_J, double E_L, double E_C_theta,
                                           double E_C_phi, double C_g, double C_0) {
  CircuitParams p;
  p.E_J = E_J;
  p.E_L = E_L;
  p.E_C_theta = E_C_theta;
  p.E_C_phi = E_C_phi;
  p.C_g = C_g;
  p.C_0 = C_0;
  p.sync_capacitances();
  return p;
}

void CircuitParams::sync_capacitances() {
  if (!(E_C_theta > 0.0) || !(E_C_phi > 0.0))
    throw InvalidParameters("charging energies must be positive");
  double c_theta = 1.0 / E_C_theta;
  double c_phi = 1.0 / E_C_phi;
  C = 0.5 * (c_theta - c_phi);
  C_J = 0.5 * (c_phi - C_0 - C_g);
}

void CircuitParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidParameters(std::string(name) + " must be strictly positive");
  };
  positive(E_J, "E_J");
  positive(E_L, "E_L");
  positive(E_C_theta, "E_C_theta");
  positive(E_C_phi, "E_C_phi");
  positive(omega_p_over_2pi, "omega_p_over_2pi");
  auto fraction = [](double v, const char* name) {
    if (!(std::abs(v) < 1.0)) throw InvalidParameters(std::string(name) + " must satisfy |x| < 1");
  };
  fraction(dE_J, "dE_J");
  fraction(dE_L, "dE_L");
  fraction(dC, "dC");
  fraction(dC_J, "dC_J");
  for (int i = 0; i < 4; ++i) {
    fraction(dC_g[i], "dC_g");
    fraction(dC_0[i], "dC_0");
  }
  if (C < 0.0 || C_J < 0.0 || C_g < 0.0 || C_0 < 0.0)
    throw InvalidParameters("capacitances must be non-negative");
  mode_capacitances(*this);
}

bool CircuitParams::has_disorder() const {
  return dE_J != 0.0 || dE_L != 0.0 || dC != 0.0 || dC_J != 0.0 || has_gate_ground_disorder();
}

bool CircuitParams::has_gate_ground_disorder() const {
  for (int i = 0; i < 4; ++i)
    if (dC_g[i] != 0.0 || dC_0[i] != 0.0) return true;
  return false;
}

ModeCapacitances mode_capacitances(const CircuitParams& p) {
  double base = p.C_0 + p.C_g;
  ModeCapacitances m{base + 2.0 * p.C_J, base + 2.0 * (p.C + p.C_J), base + 2.0 * p.C, base};
  if (!(m.phi > 0.0) || !(m.theta > 0.0) || !(m.zeta > 0.0) || !(m.sigma > 0.0))
    throw InvalidParameters("mode capacitances must be strictly positive");
  return m;
}

Eigen::Matrix4d normal_mode_matrix() {
  Eigen::Matrix4d t;
  t << -1, 1, -1, 1,
       -1, 1, 1, -1,
        1, 1, -1, -1,
        1, 1, 1, 1;
  return 0.5 * t;
}

Eigen::Vector4d node_to_normal(const Eigen::Vector4d& node_values) {
  return normal_mode_matrix() * node_values;
}

Eigen::Matrix4d node_capacitance_matrix(const CircuitParams& p) {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  auto link = [&c](int i, int j, double v) {
    c(i, i) += v;
    c(j, j) += v;
    c(i, j) -= v;
    c(j, i) -= v;
  };
  link(0, 1, p.C_J * (1.0 + 0.5 * p.dC_J));
  link(2, 3, p.C_J * (1.0 - 0.5 * p.dC_J));
  link(0, 2, p.C * (1.0 - 0.5 * p.dC));
  link(1, 3, p.C * (1.0 + 0.5 * p.dC));
  for (int i = 0; i < 4; ++i) c(i, i) += p.C_g * (1.0 + p.dC_g[i]) + p.C_0 * (1.0 + p.dC_0[i]);
  return c;
}

RegimeReport impedances(const CircuitParams& p) {
  RegimeReport r;
  r.Z_phi_over_RQ = std::sqrt(p.E_C_phi / p.E_L) / kPi;
  r.Z_theta_over_RQ = std::sqrt(p.E_C_theta / p.E_J) / kPi;
  r.zero_pi_regime = r.Z_theta_over_RQ < 1.0 && 1.0 < r.Z_phi_over_RQ;
  return r;
}

double zeta_frequency(const CircuitParams& p) {
  double ec_zeta = 1.0 / mode_capacitances(p).zeta;
  return 4.0 * std::sqrt(ec_zeta * p.E_L);
}

void BasisSpec::validate() const {
  if (n_charge_max < 1 || n_fock_phi < 1 || n_fock_zeta < 1 || n_fock_res < 1 || n_charge_sigma < 0)
    throw InvalidParameters("basis cutoffs must be >= 1");
  if (!(convergence_tol > 0.0)) throw InvalidParameters("convergence_tol must be positive");
}

Mode parse_mode(const std::string& name) {
  if (name == "phi") return Mode::phi;
  if (name == "theta") return Mode::theta;
  if (name == "zeta") return Mode::zeta;
  if (name == "sigma") return Mode::sigma;
  throw InvalidParameters("unknown mode label: " + name);
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::phi: return "phi";
    case Mode::theta: return "theta";
    case Mode::zeta: return "zeta";
    case Mode::sigma: return "sigma";
  }
  return "?";
}

}  // namespace zp
