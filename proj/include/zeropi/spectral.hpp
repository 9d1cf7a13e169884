#pragma once

#include <string>
#include <vector>

#include "zeropi/circuit.hpp"
#include "zeropi/eigensolver.hpp"
#include "zeropi/operators.hpp"

namespace zp {

struct Doublet {
  int lower;
  int upper;
  double splitting;
};

struct Spectrum {
  VecR eigenvalues;
  MatC eigenvectors;
  std::vector<Doublet> doublets;
  BasisSpec basis_used;
  BasisLabels labels;
  double max_residual = 0.0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

// Greedy pairing from the bottom: (i, i+1) is a doublet when its gap is
// below ratio * min(adjacent gaps).
std::vector<Doublet> find_doublets(const VecR& levels, double ratio = 0.3);

Spectrum diagonalize(const OperatorMatrix& h, int k, const SolverOptions& opt = {});
Spectrum diagonalize(const ThetaPhiModel& m, int k, const SolverOptions& opt = {});
Spectrum spectrum_2d(const CircuitParams& p, const BasisSpec& b, int k, const SolverOptions& opt = {});

cplx matrix_element(const OperatorMatrix& op, const Spectrum& s, int i, int j);
// <i|op|j> for i, j < M
MatC matrix_table(const SpMatC& op, const Spectrum& s, int M);
MatC matrix_table(const LinearOp& op, const Spectrum& s, int M);

MatC n_theta_table(const ThetaPhiModel& m, const Spectrum& s, int M);
MatC n_phi_table(const ThetaPhiModel& m, const Spectrum& s, int M);
MatC phi_table(const ThetaPhiModel& m, const Spectrum& s, int M);

struct ConvergenceReport {
  BasisSpec basis;
  int evaluations = 0;
  VecR levels;
};

// Smallest (n_charge_max, n_fock_phi) for which the lowest `levels`
// eigenvalues of the theta-phi model are stable to tol (relative).
ConvergenceReport converge_basis(const CircuitParams& p, const BasisSpec& start, double tol,
                                 int levels = 12, Index max_dim = 60000);

// Odd-harmonic (theta -> theta + pi) breaking of the effective theta
// Hamiltonian relative to its largest potential matrix element.
double symmetry_residual(const CircuitParams& p, const BasisSpec& b);

// Named scalar parameter access for sweeps and overrides.
void set_named_param(CircuitParams& p, const std::string& name, double value);
double get_named_param(const CircuitParams& p, const std::string& name);

struct SweepPoint {
  double value = 0.0;
  bool ok = false;
  std::string error;
  VecR levels;          // relative to the ground energy
  double ground = 0.0;
  std::vector<double> splittings;
  double n_theta_01 = 0.0;  // |<0|n_theta|1>|
};

std::vector<SweepPoint> sweep(const CircuitParams& p, const std::string& axis,
                              const std::vector<double>& grid, const BasisSpec& b, int k,
                              int workers = 1);

}  // namespace zp
