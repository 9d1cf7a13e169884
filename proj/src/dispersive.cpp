#include "zeropi/dispersive.hpp"

#include <cmath>

#include "zeropi/parallel.hpp"

namespace zp {

MatC coupling_table(const MatC& n_table, double coupling_ratio, double eV_rms) {
  return (coupling_ratio * eV_rms) * n_table;
}

MatC coupling_table(const CircuitParams& p, Mode mode, double eV_rms, const ThetaPhiModel& m,
                    const Spectrum& s, int M, double coupling_ratio) {
  if (M > s.size()) throw InvalidParameters("coupling table needs more levels than computed");
  ModeCapacitances c = mode_capacitances(p);
  double ratio = coupling_ratio;
  MatC n;
  switch (mode) {
    case Mode::theta:
      if (ratio <= 0.0) ratio = p.C_g / c.theta;
      n = n_theta_table(m, s, M);
      break;
    case Mode::phi:
      if (ratio <= 0.0) ratio = p.C_g / c.phi;
      n = n_phi_table(m, s, M);
      break;
    default:
      throw InvalidParameters("coupling table on the theta-phi model supports theta and phi only");
  }
  return coupling_table(n, ratio, eV_rms);
}

DispersiveResult dispersive_shifts(const MatC& g, const VecR& levels, double omega_r, double n_bar,
                                   double ratio_threshold) {
  const Index M = g.rows();
  if (g.cols() != M || levels.size() < M) throw InvalidParameters("coupling table and levels disagree");
  if (M < 2) throw InvalidParameters("dispersive shifts need at least two levels");
  DispersiveResult r;
  r.omega_r = omega_r;
  r.g = g;
  r.delta.resize(M, M);
  r.chi_ij = MatR::Zero(M, M);
  r.validity = MatB::Constant(M, M, true);
  const double photons = std::sqrt(n_bar + 1.0);
  for (Index i = 0; i < M; ++i)
    for (Index j = 0; j < M; ++j) {
      double d = (levels(i) - levels(j)) - omega_r;
      double g2 = std::norm(g(i, j));
      r.delta(i, j) = d;
      if (g2 == 0.0) continue;
      if (!(std::abs(d) > ratio_threshold * std::sqrt(g2) * photons)) {
        r.validity(i, j) = false;
        ++r.invalid_pairs;
        if (i < 2 || j < 2) r.qubit_valid = false;
        continue;
      }
      r.chi_ij(i, j) = g2 / d;
    }
  r.lambda_levels = r.chi_ij.rowwise().sum();
  r.chi_levels = r.lambda_levels - r.chi_ij.colwise().sum().transpose();
  r.chi_qubit = 0.5 * (r.chi_levels(1) - r.chi_levels(0));
  r.omega_q_tilde = levels(1) + r.lambda_levels(1) - levels(0) - r.lambda_levels(0);
  r.omega_r_tilde = omega_r + 0.5 * (r.chi_levels(0) + r.chi_levels(1));
  return r;
}

StraddlingScan straddling_scan(const MatC& g, const VecR& levels, const std::vector<double>& grid,
                               double n_bar, double ratio_threshold, int workers) {
  auto pts = parallel_map(grid.size(), workers, [&](std::size_t i) {
    return dispersive_shifts(g, levels, grid[i], n_bar, ratio_threshold);
  });
  StraddlingScan s;
  double best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s.omega_r.push_back(grid[i]);
    s.chi.push_back(pts[i].chi_qubit);
    s.chi_0.push_back(pts[i].chi_levels(0));
    s.chi_1.push_back(pts[i].chi_levels(1));
    s.valid.push_back(pts[i].qubit_valid);
    if (pts[i].qubit_valid && std::abs(pts[i].chi_qubit) > best) {
      best = std::abs(pts[i].chi_qubit);
      s.best = static_cast<int>(i);
    }
  }
  return s;
}

DispersiveModel dispersive_model(const CircuitParams& p, const BasisSpec& b,
                                 const DispersiveSetup& setup) {
  ThetaPhiModel m(p, b);
  Spectrum s = diagonalize(m, setup.M);
  DispersiveModel out;
  out.levels = s.eigenvalues.array() - s.eigenvalues(0);
  out.g = coupling_table(p, setup.mode, setup.eV_rms, m, s, setup.M, setup.coupling_ratio);
  ModeCapacitances c = mode_capacitances(p);
  double ratio = setup.coupling_ratio > 0.0
                     ? setup.coupling_ratio
                     : p.C_g / (setup.mode == Mode::theta ? c.theta : c.phi);
  out.weak_coupling_warning = ratio > 0.3;
  return out;
}

}  // namespace zp
