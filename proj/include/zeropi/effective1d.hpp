#pragma once

#include <string>
#include <vector>

#include "zeropi/circuit.hpp"
#include "zeropi/operators.hpp"

namespace zp {

// uniform grid of n points on [start, start + 2 pi)
VecR theta_grid(int n, double start = -0.5 * kPi);

struct BoCurve {
  VecR theta;
  VecR energy;
  double phi_ext = 0.0;
};

// Ground energy of the phi sector with theta frozen as a parameter.
BoCurve bo_ground_energy(const CircuitParams& p, const VecR& theta, double phi_ext, int n_fock_phi,
                         int workers = 1);

// E_0(theta) = c0 + sum_k a_k cos(k theta) + b_k sin(k theta)
struct FourierFit {
  double c0 = 0.0;
  VecR a;  // a(k-1) for k = 1..order
  VecR b;
  double residual = 0.0;  // max |E_0 - fit| over the grid
};

FourierFit fourier_project(const BoCurve& curve, int order = 4);

OperatorMatrix build_1d_hamiltonian(const FourierFit& potential, const CircuitParams& p,
                                    int n_charge_max);
OperatorMatrix build_1d_hamiltonian(const BoCurve& curve, const CircuitParams& p, int n_charge_max,
                                    int order = 4);

// Largest |a_k|, |b_k| for 5 <= k <= 8.
double high_harmonic_weight(const BoCurve& curve);

struct FitOptions {
  int theta_points = 81;
  int n_fock_phi = 0;  // 0: auto_fock_phi
  int workers = 1;
  double accept_ratio = 1e-3;  // residual / E_alpha
  double breakdown_ratio = 0.01;
};

// 300 at E_L = 1e-3, growing as E_L^{-1/2} below it
int auto_fock_phi(const CircuitParams& p);

struct EffectiveModelFit {
  double E_alpha = 0.0;
  double E_beta = 0.0;
  double E_gamma = 0.0;
  double c_alpha = 0.0;  // constant term c0(phi_ext) = c_alpha + c_beta cos(phi_ext)
  double c_beta = 0.0;
  double residual = 0.0;  // max abs error of the 5-mode theta fit over the grid
  double flux_residual = 0.0;
  double max_high_harmonic = 0.0;  // largest |a_k|, k >= 5
  bool ansatz_warning = false;
  int theta_points = 0;
  std::vector<double> phi_ext_grid;
  std::vector<double> E1, E2;  // per-flux coefficients of cos(theta), cos(2 theta)
  std::vector<FourierFit> fits;
  std::vector<BoCurve> curves;

  double E2_at(double phi_ext) const;
  double E1_at(double phi_ext) const;
  // fitted E_0(theta; phi_ext) in the two-harmonic form plus constant
  double potential(double theta, double phi_ext) const;
};

struct FitRejected : NumericalError {
  FitRejected(const std::string& what, double residual_)
      : NumericalError(what), residual(residual_) {}
  double residual;
};

EffectiveModelFit fit_coefficients(const CircuitParams& p, const std::vector<double>& phi_ext_grid,
                                   const FitOptions& opt = {});

}  // namespace zp
