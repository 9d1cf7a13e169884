#include "zeropi/effective1d.hpp"

#include <cmath>

#include "zeropi/parallel.hpp"

namespace zp {

VecR theta_grid(int n, double start) {
  if (n < 1) throw InvalidParameters("theta grid needs at least one point");
  VecR t(n);
  for (int i = 0; i < n; ++i) t(i) = start + 2.0 * kPi * i / n;
  return t;
}

BoCurve bo_ground_energy(const CircuitParams& p, const VecR& theta, double phi_ext, int n_fock_phi,
                         int workers) {
  OscillatorSector osc(p.E_C_phi, p.E_L, n_fock_phi);
  const VecR c = osc.cos_shift(0.5 * phi_ext);
  const MatR& h0 = osc.h0();
  auto energies = parallel_map(static_cast<std::size_t>(theta.size()), workers, [&](std::size_t i) {
    MatR h = h0;
    h.diagonal() -= 2.0 * p.E_J * std::cos(theta(static_cast<Index>(i))) * c;
    Eigen::SelfAdjointEigenSolver<MatR> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("phi-sector eigensolver failed");
    return es.eigenvalues()(0);
  });
  BoCurve out;
  out.theta = theta;
  out.energy = Eigen::Map<VecR>(energies.data(), static_cast<Index>(energies.size()));
  out.phi_ext = phi_ext;
  return out;
}

FourierFit fourier_project(const BoCurve& curve, int order) {
  const Index n = curve.theta.size();
  if (2 * order + 1 > n) throw InvalidParameters("theta grid too coarse for the requested order");
  FourierFit f;
  f.c0 = curve.energy.mean();
  f.a = VecR::Zero(order);
  f.b = VecR::Zero(order);
  for (int k = 1; k <= order; ++k) {
    VecR arg = k * curve.theta;
    f.a(k - 1) = 2.0 * curve.energy.dot(arg.array().cos().matrix()) / n;
    f.b(k - 1) = 2.0 * curve.energy.dot(arg.array().sin().matrix()) / n;
  }
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    double v = f.c0;
    for (int k = 1; k <= order; ++k)
      v += f.a(k - 1) * std::cos(k * curve.theta(i)) + f.b(k - 1) * std::sin(k * curve.theta(i));
    worst = std::max(worst, std::abs(curve.energy(i) - v));
  }
  f.residual = worst;
  return f;
}

OperatorMatrix build_1d_hamiltonian(const FourierFit& v, const CircuitParams& p, int n_charge_max) {
  if (n_charge_max < 1) throw InvalidParameters("charge cutoff must be >= 1");
  const int d = 2 * n_charge_max + 1;
  std::vector<Eigen::Triplet<cplx>> t;
  for (int i = 0; i < d; ++i) {
    double q = (i - n_charge_max) - p.n_g_theta;
    t.emplace_back(i, i, 4.0 * p.E_C_theta * q * q + v.c0);
  }
  // <n|cos k theta|n+k> = 1/2, <n|sin k theta|n+k> = i/2
  for (Index k = 1; k <= v.a.size(); ++k) {
    cplx h(0.5 * v.a(k - 1), 0.5 * v.b(k - 1));
    if (h == cplx(0.0)) continue;
    for (int i = 0; i + k < d; ++i) {
      t.emplace_back(i, i + k, h);
      t.emplace_back(i + k, i, std::conj(h));
    }
  }
  SpMatC m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  OperatorMatrix op{m, {{"theta", d}}, true};
  op.check();
  return op;
}

OperatorMatrix build_1d_hamiltonian(const BoCurve& curve, const CircuitParams& p, int n_charge_max,
                                    int order) {
  return build_1d_hamiltonian(fourier_project(curve, order), p, n_charge_max);
}

double high_harmonic_weight(const BoCurve& curve) {
  int order = std::min<int>(8, static_cast<int>((curve.theta.size() - 1) / 2));
  FourierFit f = fourier_project(curve, order);
  double w = 0.0;
  for (int k = 5; k <= order; ++k) w = std::max({w, std::abs(f.a(k - 1)), std::abs(f.b(k - 1))});
  return w;
}

double EffectiveModelFit::E2_at(double phi_ext) const { return E_alpha - E_beta * std::cos(phi_ext); }

double EffectiveModelFit::E1_at(double phi_ext) const { return E_gamma * std::cos(0.5 * phi_ext); }

double EffectiveModelFit::potential(double theta, double phi_ext) const {
  return c_alpha + c_beta * std::cos(phi_ext) - E2_at(phi_ext) * std::cos(2.0 * theta) -
         E1_at(phi_ext) * std::cos(theta);
}

int auto_fock_phi(const CircuitParams& p) {
  if (!(p.E_L > 0.0)) throw InvalidParameters("E_L must be positive");
  return std::max(300, static_cast<int>(std::ceil(300.0 * std::sqrt(1e-3 / p.E_L))));
}

EffectiveModelFit fit_coefficients(const CircuitParams& p, const std::vector<double>& grid,
                                   const FitOptions& opt) {
  if (grid.size() < 5) throw InvalidParameters("flux fit needs at least 5 points");
  auto has = [&](double v) {
    for (double g : grid)
      if (std::abs(g - v) < 1e-12) return true;
    return false;
  };
  if (!has(0.0) || !has(kPi)) throw InvalidParameters("flux grid must contain 0 and pi");

  EffectiveModelFit fit;
  fit.theta_points = opt.theta_points;
  fit.phi_ext_grid = grid;
  const VecR theta = theta_grid(opt.theta_points);
  const int n_fock = opt.n_fock_phi > 0 ? opt.n_fock_phi : auto_fock_phi(p);
  for (double pe : grid) {
    fit.curves.push_back(bo_ground_energy(p, theta, pe, n_fock, opt.workers));
    fit.fits.push_back(fourier_project(fit.curves.back(), 4));
    fit.E2.push_back(-fit.fits.back().a(1));
    fit.E1.push_back(-fit.fits.back().a(0));
    fit.residual = std::max(fit.residual, fit.fits.back().residual);
    fit.max_high_harmonic = std::max(fit.max_high_harmonic, high_harmonic_weight(fit.curves.back()));
  }

  const Index n = static_cast<Index>(grid.size());
  MatR A(n, 2);
  VecR e2(n), c0(n), cosh(n), e1(n);
  for (Index i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = -std::cos(grid[i]);
    e2(i) = fit.E2[i];
    e1(i) = fit.E1[i];
    c0(i) = fit.fits[i].c0;
    cosh(i) = std::cos(0.5 * grid[i]);
  }
  auto qr = A.colPivHouseholderQr();
  VecR ab = qr.solve(e2);
  fit.E_alpha = ab(0);
  fit.E_beta = ab(1);
  fit.E_gamma = cosh.dot(e1) / cosh.squaredNorm();
  VecR cc = qr.solve(c0);
  fit.c_alpha = cc(0);
  fit.c_beta = -cc(1);

  for (Index i = 0; i < n; ++i)
    fit.flux_residual = std::max({fit.flux_residual, std::abs(fit.E2_at(grid[i]) - e2(i)),
                                  std::abs(fit.E1_at(grid[i]) - e1(i))});
  if (!(fit.E_alpha > 0.0))
    throw FitRejected("effective model fit gave non-positive E_alpha", fit.residual);
  if (fit.residual > opt.accept_ratio * fit.E_alpha)
    throw FitRejected("effective model residual " + std::to_string(fit.residual) +
                          " exceeds acceptance threshold",
                      fit.residual);
  fit.ansatz_warning = fit.max_high_harmonic > opt.breakdown_ratio * fit.E_alpha;
  return fit;
}

}  // namespace zp
