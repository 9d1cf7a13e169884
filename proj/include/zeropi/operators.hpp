#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zeropi/circuit.hpp"
#include "zeropi/types.hpp"

namespace zp {

using BasisLabels = std::vector<std::pair<std::string, int>>;

struct OperatorMatrix {
  SpMatC data;
  BasisLabels basis;
  bool hermitian = true;

  Index dim() const { return data.rows(); }
  double hermiticity_defect() const;
  // Throws if the declared basis does not match the matrix size or the
  // hermitian flag is violated.
  void check() const;
  bool is_zero(double tol = 0.0) const;
};

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);

// Oscillator of 4 E_C n^2 + E_L x^2 truncated to `size` Fock states and
// represented on the eigenbasis of the truncated position operator.
class OscillatorSector {
 public:
  OscillatorSector(double E_C, double E_L, int size);

  int size() const { return size_; }
  double length() const { return length_; }
  double omega() const { return omega_; }
  const VecR& nodes() const { return nodes_; }
  const MatR& h0() const { return h0_; }
  const MatC& n() const { return n_; }
  // DVR -> Fock change of basis (columns are DVR functions)
  const MatR& to_fock() const { return to_fock_; }
  double n_norm() const { return n_norm_; }

  VecR cos_shift(double a) const;
  VecR sin_shift(double a) const;

 private:
  int size_;
  double length_, omega_, n_norm_;
  VecR nodes_;
  MatR h0_, to_fock_;
  MatC n_;
};

struct ModeSet {
  bool zeta = false;
  bool sigma = false;
  bool resonator = false;
};

// Ordered tensor factors theta, phi, [zeta], [sigma], [resonator].
class SectorSet {
 public:
  SectorSet(const CircuitParams& p, const BasisSpec& b, ModeSet modes);

  const BasisLabels& labels() const { return labels_; }
  Index dim() const { return dim_; }
  const ModeSet& modes() const { return modes_; }
  const OscillatorSector& phi() const { return phi_; }
  const OscillatorSector& zeta() const;

  SpMatC embed(const std::string& label, const SpMatC& local) const;
  SpMatC embed(const std::string& l1, const SpMatC& o1, const std::string& l2,
               const SpMatC& o2) const;

  // local operators
  SpMatC n_charge(const std::string& label) const;  // theta or sigma
  SpMatC exp_i_theta() const;
  SpMatC n_osc(const std::string& label) const;      // phi or zeta
  SpMatC x_osc(const std::string& label) const;
  SpMatC h0_osc(const std::string& label) const;
  SpMatC res_a() const;
  SpMatC n_mode(Mode m) const;  // embedded charge operator of a normal mode

 private:
  int position(const std::string& label) const;

  BasisLabels labels_;
  Index dim_;
  ModeSet modes_;
  BasisSpec basis_;
  OscillatorSector phi_;
  std::vector<OscillatorSector> zeta_;
};

OperatorMatrix build_h_symm(const CircuitParams& p, const BasisSpec& b, ModeSet modes);
OperatorMatrix build_h_asymm(const CircuitParams& p, const BasisSpec& b, ModeSet modes);

struct DriveOptions {
  bool include_sigma = false;           // Sigma-mode drive and rows
  bool include_gate_ground = false;     // dC_g / dC_0 rows
};

// Coefficient operator of e*V_mu for each driven mode; H_drive = sum_mu (eV_mu) D_mu.
std::map<Mode, OperatorMatrix> build_drive_ops(const CircuitParams& p, const BasisSpec& b,
                                               ModeSet modes, DriveOptions opt = {});

// (C_g/C_mu) (e V_rms) n_mu (x) i(a^dag - a)
OperatorMatrix build_resonator_coupling(const CircuitParams& p, Mode mode, double eV_rms,
                                        const BasisSpec& b, ModeSet modes);

OperatorMatrix build_h_dcg_dc0(const CircuitParams& p, const BasisSpec& b, ModeSet modes);

// Normal-mode values of per-node disorder fractions, T d.
Eigen::Vector4d normal_mode_disorder(const std::array<double, 4>& node_fractions);

// Block-tridiagonal theta-phi Hamiltonian (charge index slow, DVR fast),
// including the dE_J and dC_J disorder terms.
class ThetaPhiModel {
 public:
  ThetaPhiModel(const CircuitParams& p, const BasisSpec& b);

  int blocks() const { return static_cast<int>(charges_.size()); }
  int block_size() const { return phi_.size(); }
  Index dim() const { return static_cast<Index>(blocks()) * block_size(); }
  const std::vector<MatC>& diagonal() const { return diag_; }
  const std::vector<VecC>& upper() const { return upper_; }
  const VecR& charges() const { return charges_; }
  const OscillatorSector& phi() const { return phi_; }
  const CircuitParams& params() const { return params_; }
  const BasisSpec& basis() const { return basis_; }

  void apply(const VecC& in, VecC& out) const;
  void apply_n_theta(const VecC& in, VecC& out) const;
  void apply_n_phi(const VecC& in, VecC& out) const;
  void apply_cos_theta(const VecC& in, VecC& out) const;
  void apply_parity(const VecC& in, VecC& out) const;  // exp(-i pi n_theta)
  double lower_bound() const;
  SpMatC to_sparse() const;

 private:
  CircuitParams params_;
  BasisSpec basis_;
  OscillatorSector phi_;
  VecR charges_;
  std::vector<MatC> diag_;
  std::vector<VecC> upper_;
};

}  // namespace zp
