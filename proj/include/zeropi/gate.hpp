#pragma once

#include <string>
#include <vector>

#include "zeropi/circuit.hpp"
#include "zeropi/dynamics.hpp"
#include "zeropi/spectral.hpp"

namespace zp {

// Lowest M eigenstates of the theta-phi model with the theta-drive operator
// (coefficient of e*V_theta, including the parasitic phi drive for dC_J).
class GateModel {
 public:
  GateModel(const CircuitParams& p, const BasisSpec& b, int M, const GateModel* reference = nullptr);

  int levels() const { return static_cast<int>(energies_.size()); }
  const VecR& energies() const { return energies_; }  // relative to level 0
  const MatC& drive() const { return drive_; }
  const MatC& n_theta() const { return n_theta_; }
  const MatC& n_phi() const { return n_phi_; }
  const MatC& phi() const { return phi_; }
  const CircuitParams& params() const { return params_; }
  const BasisSpec& basis() const { return basis_; }
  const Spectrum& spectrum() const { return spectrum_; }
  // 2 C_g / C_theta: drive angular frequency per unit e*V
  double drive_scale() const { return drive_scale_; }
  double omega_of(double eV) const { return drive_scale_ * eV; }
  double eV_of(double omega) const { return omega / drive_scale_; }

 private:
  CircuitParams params_;
  BasisSpec basis_;
  Spectrum spectrum_;
  VecR energies_;
  MatC drive_, n_theta_, n_phi_, phi_;
  double drive_scale_ = 0.0;
};

struct RotationAngles {
  double phi_xz = 0.0;
  double phi_xy = 0.0;
  double angle = 0.0;  // rotation angle in [0, pi]
  bool far_from_pi = false;
};

RotationAngles rotation_angles(const Mat2c& u);

struct GateResult {
  Mat2c u_reduced;
  Mat2c u_closest;
  Eigen::Vector2d singular_values;
  double distance = 0.0;
  double fidelity = 0.0;
  double leakage = 0.0;
  double phi_xz = 0.0;
  double phi_xy = 0.0;
  double rotation = 0.0;
  bool rotation_flag = false;
  double hyperbola = 0.0;  // Omega t_g / pi
  double unitarity_defect = 0.0;
  PulseSpec pulse_used;
};

// average gate fidelity of u against target including leakage
double average_fidelity(const Mat2c& target, const Mat2c& u);
void closest_unitary(const Mat2c& u, Mat2c& closest, Eigen::Vector2d& singular, double& distance);

GateResult simulate_gate(const GateModel& m, const PulseSpec& pulse, const PropagationOptions& opt = {});

struct SearchBox {
  double omega_min = 0.25, omega_max = 5.0;  // drive angular frequency
  double t_min = 0.3, t_max = 8.0;
  int grid = 60;
  int max_iterations = 200;
  double tol = 1e-10;
  double distance_threshold = 0.1;
  double rotation_window = 0.2;  // admissible |angle - pi|
  double hyperbola_window = 0.5;  // admissible |Omega t / pi - 1|; <= 0 disables
};

struct OptimizationFailed : NumericalError {
  OptimizationFailed(const std::string& what, GateResult best_)
      : NumericalError(what), best(std::move(best_)) {}
  GateResult best;
};

struct OptimizedGate {
  PulseSpec pulse;
  GateResult result;
  int evaluations = 0;
};

OptimizedGate optimize_pulse(const GateModel& m, const SearchBox& box = {}, int workers = 1);

struct GateMapPoint {
  double E_J = 0.0, E_C_theta = 0.0;
  bool ok = false;
  std::string error;
  double fidelity = 0.0, distance = 0.0, phi_xz = 0.0, phi_xy = 0.0;
  double omega = 0.0, t_gate = 0.0, hyperbola = 0.0;
  int occupied_doublets = 0;
};

std::vector<GateMapPoint> gate_parameter_map(const CircuitParams& base, const std::vector<double>& E_J,
                                             const std::vector<double>& E_C_theta, const BasisSpec& b,
                                             int M, const SearchBox& box = {}, int workers = 1);

struct Excursion {
  std::vector<double> t;
  MatR populations;  // rows: time, cols: level
  double max_norm_error = 0.0;
  int occupied_doublets = 0;  // doublets above the level 1 with transient population > threshold
};

Excursion multilevel_excursion(const GateModel& m, const PulseSpec& pulse, int samples = 400,
                               double threshold = 0.01);

struct RobustnessPoint {
  double value = 0.0;
  bool ok = false;
  std::string error;
  double fidelity = 0.0;
  double relative_change = 0.0;
  double leakage = 0.0;
};

// axis: sigma (edge time, same units as t_gate), phi_ext, dE_J or dC_J
std::vector<RobustnessPoint> robustness_scan(const GateModel& reference, const OptimizedGate& ref_gate,
                                             const std::string& axis, const std::vector<double>& grid,
                                             int workers = 1);

struct DissipationRates {
  double gamma_relax = 0.0;   // |0><1|
  double gamma_excite = 0.0;  // |1><0|
  double gamma_phi = 0.0;     // pure dephasing of the logical pair
  double temperature = 0.015;
  double Q_zeta = 30000.0;
  double n_zeta = -1.0;      // < 0: thermal occupation at `temperature`
  bool zeta_loss = true;
};

struct DissipativeGate {
  double fidelity = 0.0;
  double leakage = 0.0;
  double kappa_zeta = 0.0;
  double n_zeta = 0.0;
  double omega_zeta = 0.0;
};

// Eigenstates of `m` times a zeta Fock space of n_zeta states, coupled
// through the dC and dE_L values of m.params(); fidelity against `target`.
DissipativeGate dissipative_gate_fidelity(const GateModel& m, int n_zeta, const PulseSpec& pulse,
                                          const Mat2c& target, const DissipationRates& rates,
                                          double dt = 0.0);

}  // namespace zp
