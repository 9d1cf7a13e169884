#include "zeropi/cooling.hpp"

#include <algorithm>
#include <cmath>

#include "zeropi/dynamics.hpp"
#include "zeropi/parallel.hpp"
#include "zeropi/units.hpp"

namespace zp {

double CoolingConfig::thermal_occupation() const {
  if (n_th >= 0.0) return n_th;
  if (temperature <= 0.0) return 0.0;
  units::Scale sc{omega_p_over_2pi};
  return units::bose_einstein(sc.energy_over_kT(omega_zeta, temperature));
}

double CoolingConfig::modulation() const {
  double wm = omega_m > 0.0 ? omega_m : omega_b_bar - omega_zeta;
  return modulation_correction(wm, chi0_zeta, chi1_zeta, kerr_K);
}

void CoolingConfig::validate() const {
  if (!(omega_zeta >= 0.0)) throw InvalidParameters("omega_zeta must be >= 0");
  if (!(omega_b_bar > 0.0)) throw InvalidParameters("omega_b_bar must be positive");
  if (!(epsilon >= 0.0)) throw InvalidParameters("epsilon must be >= 0");
  if (!(kappa_b > 0.0)) throw InvalidParameters("kappa_b must be positive");
  if (!(kappa_zeta >= 0.0)) throw InvalidParameters("kappa_zeta must be >= 0");
  if (!(g_bar >= 0.0)) throw InvalidParameters("g_bar must be >= 0");
  if (!(modulation() > 0.0)) throw InvalidParameters("modulation frequency must be positive");
}

std::vector<std::string> CoolingValidity::warnings() const {
  std::vector<std::string> w;
  if (!weak_coupling) w.push_back("g_bar is not small against omega_zeta and omega_b");
  if (!bad_cavity) w.push_back("kappa_b / g' below 10");
  if (!cold_b_mode) w.push_back("b mode is thermally excited (hbar omega_b / kT < 5)");
  if (!slow_dispersive) w.push_back("chi_01 / gamma_cooling above 0.1");
  if (!tail_ok) w.push_back("Bessel tail above 1%");
  return w;
}

double effective_coupling(const CoolingConfig& c) {
  const double wm = c.modulation();
  if (!(wm > 0.0)) throw InvalidParameters("modulation frequency must be positive");
  const double x = c.epsilon / wm;
  const double r = c.epsilon / (4.0 * c.omega_b_bar);
  return c.g_bar * (std::cyl_bessel_j(1.0, x) - r * (std::cyl_bessel_j(0.0, x) + std::cyl_bessel_j(2.0, x)));
}

double coupling_from_capacitances(double C_g, double C_zeta, double C_b, double omega_zeta, double omega_b) {
  if (!(C_zeta > 0.0 && C_b > 0.0) || omega_zeta < 0.0 || omega_b < 0.0)
    throw InvalidParameters("invalid mode capacitances or frequencies");
  // n_zpf^2 = omega C / 16 for H = 4 E_C n^2 + ...
  return 8.0 * C_g / (C_zeta * C_b) * std::sqrt(omega_zeta * C_zeta / 16.0) * std::sqrt(omega_b * C_b / 16.0);
}

namespace {

double bessel(int n, double x) {
  double v = std::cyl_bessel_j(static_cast<double>(std::abs(n)), x);
  return (n < 0 && (n % 2 != 0)) ? -v : v;
}

// |J_n(x)| <= (x/2)^|n| / |n|!
double bessel_bound(int n, double x) {
  n = std::abs(n);
  return std::exp(n * std::log(std::max(x / 2.0, 1e-300)) - std::lgamma(n + 1.0));
}

}  // namespace

SidebandRates sideband_rates(const CoolingConfig& c, bool full, int n_max) {
  c.validate();
  SidebandRates s;
  s.n_max = n_max;
  s.g_prime = effective_coupling(c);
  const double kb = c.kappa_b, wz = c.omega_zeta, wb = c.omega_b_bar;
  s.gamma_down = 4.0 * s.g_prime * s.g_prime / kb;
  double lor = 2.0 * wz / (0.5 * kb);
  s.gamma_up = s.gamma_down / (lor * lor + 1.0);
  if (!full) return s;

  const double wm = c.modulation();
  const double x = c.epsilon / wm;
  const double r = c.epsilon / (4.0 * wb);
  const double g2 = c.g_bar * c.g_bar;
  auto L = [&](double d) { return kb * g2 / (d * d + 0.25 * kb * kb); };
  double gd = 0.0, gu = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    const double jn = bessel(n, x), j1 = bessel(n + 1, x), j2 = bessel(n + 2, x);
    gd += jn * jn * (L(wz - wb + n * wm) + r * r * (L(wz - wb + (n - 1) * wm) + L(wz - wb + (n + 1) * wm)));
    gd += 2.0 * r * jn * j1 * (L(wz - wb - n * wm) + L(wz - wb - (n + 1) * wm));
    gd += 2.0 * r * r * jn * j2 * L(wz - wb - (n + 1) * wm);
    gu += jn * jn * (L(wz + wb - n * wm) + r * r * (L(wz + wb - (n + 1) * wm) + L(wz + wb - (n - 1) * wm)));
    gu += 2.0 * r * jn * j1 * (L(wz + wb + n * wm) + L(wz + wb + (n + 1) * wm));
    gu += 2.0 * r * r * jn * j2 * L(wz + wb + (n + 1) * wm);
  }
  s.gamma_down_full = gd;
  s.gamma_up_full = gu;
  // every Lorentzian is below 4 g^2 / kappa_b and |J_{n+k}| <= 1
  double tail = 0.0;
  for (int m = n_max + 1; m <= n_max + 200; ++m) {
    double b = bessel_bound(m, x);
    tail += 2.0 * b;
    if (b < 1e-300) break;
  }
  s.tail_bound = tail * (1.0 + 2.0 * r) * (1.0 + 2.0 * r) * 4.0 * g2 / kb;
  if (s.tail_bound > 0.01 * std::min(std::abs(gd), std::abs(gu)) && s.tail_bound > 0.0)
    throw NumericalError("Bessel sum tail bound " + std::to_string(s.tail_bound) + " exceeds 1% at n_max " +
                         std::to_string(n_max));
  return s;
}

SteadyPopulation steady_state_population(double kappa_zeta, double n_th, double gamma_down, double gamma_up) {
  SteadyPopulation s;
  s.gamma_cooling = kappa_zeta + gamma_down - gamma_up;
  if (!(s.gamma_cooling > 0.0)) throw InvalidParameters("cooling rate must be positive");
  s.n_ss = (kappa_zeta * n_th + gamma_up) / s.gamma_cooling;
  return s;
}

double shot_noise_dephasing(double chi01, double n_ss, double gamma_cooling) {
  if (!(gamma_cooling > 0.0)) throw InvalidParameters("cooling rate must be positive");
  return 4.0 * chi01 * chi01 * n_ss * (n_ss + 1.0) / gamma_cooling;
}

double modulation_correction(double omega_m, double chi0, double chi1, double kerr_K) {
  return omega_m - 0.5 * (chi0 + chi1) - 0.5 * kerr_K;
}

CoolingResult cooling_analysis(const CoolingConfig& c, bool full_sums) {
  SidebandRates s = sideband_rates(c, full_sums);
  CoolingResult r;
  r.g_prime = s.g_prime;
  r.gamma_down = s.gamma_down;
  r.gamma_up = s.gamma_up;
  r.n_th = c.thermal_occupation();
  SteadyPopulation ss = steady_state_population(c.kappa_zeta, r.n_th, r.gamma_down, r.gamma_up);
  r.n_ss = ss.n_ss;
  r.gamma_cooling = ss.gamma_cooling;
  const double chi01 = 0.5 * (c.chi1_zeta - c.chi0_zeta);
  r.Gamma_phi_SN = shot_noise_dephasing(chi01, r.n_ss, r.gamma_cooling);
  r.T_phi_SN = r.Gamma_phi_SN > 0.0 ? 1.0 / r.Gamma_phi_SN : std::numeric_limits<double>::infinity();
  r.purcell_factor = c.kappa_zeta > 0.0 ? r.gamma_cooling / c.kappa_zeta : std::numeric_limits<double>::infinity();
  CoolingValidity& v = r.validity;
  double wmin = std::min(c.omega_zeta, c.omega_b_bar);
  v.weak_coupling = c.g_bar == 0.0 || (wmin > 0.0 && c.g_bar / wmin <= 0.1);
  v.bad_cavity = r.g_prime == 0.0 || c.kappa_b / std::abs(r.g_prime) >= 10.0;
  if (c.temperature > 0.0) {
    units::Scale sc{c.omega_p_over_2pi};
    v.cold_b_mode = sc.energy_over_kT(c.omega_b_bar, c.temperature) >= 5.0;
  }
  v.slow_dispersive = std::abs(chi01) / r.gamma_cooling <= 0.1;
  v.tail_ok = true;
  return r;
}

FullMEReport validate_full_vs_reduced(const CoolingConfig& c, const FullMEOptions& opt) {
  c.validate();
  const int Na = opt.n_zeta, Nb = opt.n_b;
  if (Na < 2 || Nb < 2) throw InvalidParameters("two-mode cutoffs must be >= 2");
  if (Na * Nb > 200) throw DimensionLimit("two-mode Hilbert dimension above 200");
  CoolingResult red = cooling_analysis(c);
  const double nth = red.n_th;

  MatC a1 = MatC::Zero(Na, Na), b1 = MatC::Zero(Nb, Nb);
  for (int k = 1; k < Na; ++k) a1(k - 1, k) = std::sqrt(static_cast<double>(k));
  for (int k = 1; k < Nb; ++k) b1(k - 1, k) = std::sqrt(static_cast<double>(k));
  auto kron = [](const MatC& x, const MatC& y) {
    MatC k(x.rows() * y.rows(), x.cols() * y.cols());
    for (Index i = 0; i < x.rows(); ++i)
      for (Index j = 0; j < x.cols(); ++j) k.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return k;
  };
  MatC A = kron(a1, MatC::Identity(Nb, Nb));
  MatC B = kron(MatC::Identity(Na, Na), b1);
  MatC nA = A.adjoint() * A, nB = B.adjoint() * B;
  MatC X = (A.adjoint() - A) * (B.adjoint() - B);

  const double wz = c.omega_zeta + 0.5 * (c.chi0_zeta + c.chi1_zeta);
  const double wm = c.modulation();
  LindbladSpec spec;
  spec.hamiltonian = wz * nA + c.omega_b_bar * nB - c.g_bar * X - 0.5 * c.kerr_K * nB * nB;
  spec.drive.push_back({[&](double t) { return c.epsilon * std::cos(wm * t); }, nB});
  spec.drive.push_back(
      {[&](double t) { return -c.g_bar * c.epsilon / (2.0 * c.omega_b_bar) * std::cos(wm * t); }, X});
  spec.collapse.push_back({A, c.kappa_zeta * (nth + 1.0), "zeta_down"});
  spec.collapse.push_back({A.adjoint(), c.kappa_zeta * nth, "zeta_up"});
  spec.collapse.push_back({B, c.kappa_b, "b_down"});

  VecR p(Na);
  for (int k = 0; k < Na; ++k) p(k) = std::pow(nth / (1.0 + nth), k);
  p /= p.sum();
  MatC rho0 = MatC::Zero(Na * Nb, Na * Nb);
  for (int k = 0; k < Na; ++k) rho0(k * Nb, k * Nb) = p(k);
  double n0 = 0.0;
  for (int k = 0; k < Na; ++k) n0 += k * p(k);

  const double t_max = opt.t_max > 0.0 ? opt.t_max : 8.0 / red.gamma_cooling;
  const double period = 2.0 * kPi / wm;
  const double avg_from = t_max - opt.average_periods * period;
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(t_max / opt.dt - 1e-9)));
  const int every = std::max<long>(1, steps / std::max(1, opt.samples));

  FullMEReport rep;
  rep.n_reduced = red.n_ss;
  double sum = 0.0;
  long count = 0;
  const VecC dA = nA.diagonal(), dB = nB.diagonal();
  auto observe = [&](double t, const MatC& r) {
    VecC d = r.diagonal();
    double na = (dA.array() * d.array()).sum().real();
    double nb = (dB.array() * d.array()).sum().real();
    rep.max_trace_error = std::max(rep.max_trace_error, std::abs(r.trace() - 1.0));
    rep.max_b_occupation = std::max(rep.max_b_occupation, nb);
    if (t > avg_from) {
      sum += na;
      ++count;
    }
    double nr = red.n_ss + (n0 - red.n_ss) * std::exp(-red.gamma_cooling * t);
    rep.max_trajectory_discrepancy =
        std::max(rep.max_trajectory_discrepancy, std::abs(na - nr) / std::max(nth, 1e-12));
    long k = static_cast<long>(std::llround(t / (t_max / steps)));
    if (k % every == 0 || k == steps) {
      rep.t.push_back(t);
      rep.n_zeta_t.push_back(na);
      rep.n_reduced_t.push_back(nr);
      rep.n_b_t.push_back(nb);
    }
  };
  lindblad_evolve_sparse(spec, rho0, 0.0, t_max, opt.dt, observe, 1);
  rep.n_full = count > 0 ? sum / count : rep.n_zeta_t.back();
  rep.relative_discrepancy = std::abs(rep.n_full - rep.n_reduced) / std::max(std::abs(rep.n_reduced), 1e-300);
  rep.near_vacuum = rep.max_b_occupation <= 0.1;
  rep.valid = rep.near_vacuum && red.validity.bad_cavity;
  return rep;
}

MatC zeta_coupling_table(const CircuitParams& p, const ThetaPhiModel& m, const Spectrum& s, int M) {
  ModeCapacitances c = mode_capacitances(p);
  const double ec = 1.0 / c.zeta;
  const double lz = std::pow(4.0 * ec / p.E_L, 0.25);
  MatC g = MatC::Zero(M, M);
  if (p.dC != 0.0) g += (8.0 * p.C * p.dC / (c.zeta * c.theta) / (std::sqrt(2.0) * lz)) * n_theta_table(m, s, M);
  if (p.dE_L != 0.0) g += (p.E_L * p.dE_L * lz / std::sqrt(2.0)) * phi_table(m, s, M);
  return g;
}

ZetaDispersive zeta_dispersive(const CircuitParams& p, const BasisSpec& b, int M) {
  ThetaPhiModel m(p, b);
  Spectrum s = diagonalize(m, M);
  VecR levels = s.eigenvalues.array() - s.eigenvalues(0);
  ZetaDispersive z;
  z.omega_zeta = zeta_frequency(p);
  DispersiveResult d = dispersive_shifts(zeta_coupling_table(p, m, s, M), levels, z.omega_zeta);
  z.chi0 = d.chi_levels(0);
  z.chi1 = d.chi_levels(1);
  z.chi01 = d.chi_qubit;
  z.qubit_valid = d.qubit_valid;
  return z;
}

std::vector<CoolingSweepPoint> cooling_sweep(const CircuitParams& base, const BasisSpec& b,
                                             const CoolingSweepSetup& setup, int workers) {
  return parallel_map(setup.E_L.size(), workers, [&](std::size_t k) {
    CoolingSweepPoint pt;
    pt.E_L = setup.E_L[k];
    try {
      CircuitParams p = base;
      p.E_L = pt.E_L;
      p.sync_capacitances();
      pt.Z_phi_over_RQ = impedances(p).Z_phi_over_RQ;
      pt.chi = zeta_dispersive(p, b, setup.M);
      pt.omega_zeta = pt.chi.omega_zeta;
      ModeCapacitances mc = mode_capacitances(p);
      CoolingConfig c = setup.base;
      c.omega_zeta = pt.omega_zeta;
      c.omega_m = 0.0;
      c.kappa_zeta = pt.omega_zeta / setup.Q_zeta;
      c.omega_p_over_2pi = p.omega_p_over_2pi;
      c.chi0_zeta = pt.chi.chi0;
      c.chi1_zeta = pt.chi.chi1;
      c.g_bar = coupling_from_capacitances(setup.C_g_b, mc.zeta, setup.C_b, c.omega_zeta, c.omega_b_bar);
      c.n_th = setup.n_th_scale * c.thermal_occupation();
      pt.g_bar = c.g_bar;
      pt.kappa_zeta = c.kappa_zeta;
      pt.cooled = cooling_analysis(c);
      CoolingConfig off = c;
      off.g_bar = 0.0;
      pt.uncooled = cooling_analysis(off);
      pt.T_ratio = pt.cooled.T_phi_SN / pt.uncooled.T_phi_SN;
      if (pt.cooled.Gamma_phi_SN == 0.0 || pt.uncooled.Gamma_phi_SN == 0.0)
        pt.T_ratio = pt.uncooled.Gamma_phi_SN / std::max(pt.cooled.Gamma_phi_SN, 1e-300);
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    return pt;
  });
}

TrendReport cooling_trend(const std::vector<CoolingSweepPoint>& pts, double slope_fraction) {
  std::vector<std::pair<double, double>> zr;
  for (const auto& p : pts)
    if (p.ok) zr.emplace_back(p.Z_phi_over_RQ, p.T_ratio);
  std::sort(zr.begin(), zr.end());
  TrendReport t;
  if (zr.size() < 3) return t;
  t.min_ratio = t.max_ratio = zr[0].second;
  t.non_decreasing = true;
  for (std::size_t k = 1; k < zr.size(); ++k) {
    t.min_ratio = std::min(t.min_ratio, zr[k].second);
    t.max_ratio = std::max(t.max_ratio, zr[k].second);
    if (zr[k].second < zr[k - 1].second * (1.0 - 1e-9)) t.non_decreasing = false;
    double dz = zr[k].first - zr[k - 1].first;
    double slope = dz > 0.0 ? (zr[k].second - zr[k - 1].second) / dz : 0.0;
    t.max_slope = std::max(t.max_slope, slope);
    t.last_slope = slope;
  }
  t.saturating = t.non_decreasing && t.last_slope <= slope_fraction * t.max_slope;
  return t;
}

}  // namespace zp
