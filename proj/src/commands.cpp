#include "zeropi/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zeropi/parallel.hpp"
#include "zeropi/units.hpp"

namespace zp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> doublet_splittings(const VecR& levels, std::size_t n) {
  std::vector<double> out;
  for (const auto& d : find_doublets(levels)) {
    if (out.size() == n) break;
    out.push_back(d.splitting);
  }
  return out;
}

double doublet_gap(const VecR& levels) {
  auto d = find_doublets(levels);
  if (d.size() < 2) return kNaN;
  double m0 = 0.5 * (levels(d[0].lower) + levels(d[0].upper));
  double m1 = 0.5 * (levels(d[1].lower) + levels(d[1].upper));
  return m1 - m0;
}

double at(const std::vector<double>& v, std::size_t k) { return k < v.size() ? v[k] : kNaN; }

}  // namespace

OperatorMatrix effective_theta_hamiltonian(const EffectiveModelFit& fit, const CircuitParams& p, int n_charge_max) {
  FourierFit f;
  f.a = VecR::Zero(2);
  f.b = VecR::Zero(2);
  f.a(0) = -fit.E1_at(p.phi_ext);
  f.a(1) = -fit.E2_at(p.phi_ext);
  return build_1d_hamiltonian(f, p, n_charge_max);
}

BoPoint bo_point(const CircuitParams& p, const BasisSpec& b, const BoFitSection& s, int workers) {
  BoPoint pt;
  pt.Z_phi_over_RQ = impedances(p).Z_phi_over_RQ;
  FitOptions opt = s.fit;
  opt.workers = workers;
  pt.fit = fit_coefficients(p, s.phi_ext_grid, opt);
  pt.gap_estimate = std::sqrt(32.0 * p.E_C_theta * pt.fit.E_alpha);
  Spectrum s1 = diagonalize(effective_theta_hamiltonian(pt.fit, p, s.n_charge_1d), s.levels);
  pt.levels_1d = s1.eigenvalues.array() - s1.eigenvalues(0);
  pt.split_1d = doublet_splittings(pt.levels_1d, s.levels / 2);
  pt.gap_1d = doublet_gap(pt.levels_1d);
  if (s.compare_2d) {
    Spectrum s2 = spectrum_2d(p, b, s.levels);
    pt.levels_2d = s2.eigenvalues.array() - s2.eigenvalues(0);
    pt.split_2d = doublet_splittings(pt.levels_2d, s.levels / 2);
    pt.gap_2d = doublet_gap(pt.levels_2d);
  }
  pt.ok = true;
  return pt;
}

LineFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k)
    if (x[k] > 0.0 && y[k] != 0.0 && std::isfinite(y[k])) {
      lx.push_back(std::log(x[k]));
      ly.push_back(std::log(std::abs(y[k])));
    }
  LineFit f;
  f.points = static_cast<int>(lx.size());
  if (f.points < 2) return f;
  const double n = f.points;
  double mx = 0, my = 0;
  for (int k = 0; k < f.points; ++k) {
    mx += lx[k] / n;
    my += ly[k] / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (int k = 0; k < f.points; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

MonotoneReport xz_monotone(const std::vector<GateMapPoint>& pts, std::size_t nj, std::size_t nc, double tol) {
  MonotoneReport r;
  if (pts.size() != nj * nc || nj == 0 || nc == 0) throw InvalidParameters("gate map size mismatch");
  auto xz = [&](std::size_t j, std::size_t c) { return pts[j * nc + c].phi_xz; };
  for (const auto& p : pts)
    if (!p.ok) ++r.failed_points;
  for (std::size_t j = 0; j < nj; ++j)
    for (std::size_t c = 0; c < nc; ++c) {
      if (j + 1 < nj && xz(j + 1, c) > xz(j, c) + tol) ++r.violations;
      if (c + 1 < nc && xz(j, c + 1) < xz(j, c) - tol) ++r.violations;
    }
  r.x_corner = xz(nj - 1, 0);
  r.z_corner = xz(0, nc - 1);
  r.monotone = r.failed_points == 0 && r.violations == 0;
  r.spans_x_to_z = r.x_corner < 0.1 && r.z_corner > 0.5 * kPi - 0.3;
  return r;
}

namespace {

void record_regime(RunWriter& w, const CircuitParams& p) {
  RegimeReport r = impedances(p);
  w.meta()["regime"] = {{"Z_phi_over_RQ", r.Z_phi_over_RQ}, {"Z_theta_over_RQ", r.Z_theta_over_RQ}};
  w.validity("zero_pi_regime", r.zero_pi_regime);
  if (!r.zero_pi_regime) w.warning("circuit is outside Z_theta < R_Q < Z_phi");
}

void cmd_spectrum(const RunConfig& cfg, RunWriter& w) {
  BasisSpec b = cfg.basis;
  const int k = cfg.spectrum.levels;
  const CircuitParams& p = cfg.circuit;
  record_regime(w, p);
  if (cfg.spectrum.converge) {
    ConvergenceReport c = converge_basis(p, b, cfg.spectrum.converge_tol, k);
    b = c.basis;
    w.meta()["converged_basis"] = {{"n_charge_max", b.n_charge_max}, {"n_fock_phi", b.n_fock_phi},
                                   {"evaluations", c.evaluations}};
    w.tolerance("converge_tol", cfg.spectrum.converge_tol);
  }
  if (cfg.spectrum.axis.empty()) {
    Spectrum s = spectrum_2d(p, b, k);
    units::Scale sc{p.omega_p_over_2pi};
    Table t({"level", "energy", "relative", "relative_hz"});
    for (int i = 0; i < s.size(); ++i) {
      double rel = s.eigenvalues(i) - s.eigenvalues(0);
      t.add({static_cast<long long>(i), s.eigenvalues(i), rel, sc.to_hz(rel)});
    }
    w.write_table("spectrum", t);
    Table d({"doublet", "lower", "upper", "splitting", "splitting_hz"});
    for (std::size_t i = 0; i < s.doublets.size(); ++i)
      d.add({static_cast<long long>(i), static_cast<long long>(s.doublets[i].lower),
             static_cast<long long>(s.doublets[i].upper), s.doublets[i].splitting, sc.to_hz(s.doublets[i].splitting)});
    w.write_table("doublets", d);
    w.meta()["max_residual"] = s.max_residual;
    w.tolerance("eigen_residual", 1e-9);
    w.validity("eigen_residual", s.max_residual < 1e-9);
    return;
  }
  auto pts = sweep(p, cfg.spectrum.axis, cfg.spectrum.grid, b, k, cfg.workers);
  std::vector<std::string> cols{cfg.spectrum.axis, "ok"};
  for (int i = 0; i < k; ++i) cols.push_back("level_" + std::to_string(i));
  for (int i = 0; i < k / 2; ++i) cols.push_back("splitting_" + std::to_string(i));
  cols.push_back("n_theta_01");
  cols.push_back("error");
  Table t(cols);
  int failed = 0;
  for (const auto& pt : pts) {
    std::vector<Cell> row{pt.value, pt.ok};
    for (int i = 0; i < k; ++i) row.push_back(pt.ok && i < pt.levels.size() ? pt.levels(i) : kNaN);
    for (int i = 0; i < k / 2; ++i) row.push_back(at(pt.splittings, i));
    row.push_back(pt.n_theta_01);
    row.push_back(pt.error);
    t.add(row);
    if (!pt.ok) ++failed;
  }
  w.write_table("spectrum_sweep", t);
  w.validity("all_points", failed == 0);
}

void cmd_bo_fit(const RunConfig& cfg, RunWriter& w) {
  const auto& s = cfg.bo_fit;
  std::vector<double> values = s.sweep;
  const bool swept = !values.empty();
  if (!swept) values.push_back(get_named_param(cfg.circuit, s.sweep_axis));
  std::vector<BoPoint> pts;
  for (double v : values) {
    CircuitParams p = cfg.circuit;
    set_named_param(p, s.sweep_axis, v);
    BoPoint pt;
    try {
      pt = bo_point(p, cfg.basis, s, cfg.workers);
    } catch (const FitRejected& e) {
      if (!swept) throw;
      pt.error = e.what();
      pt.Z_phi_over_RQ = impedances(p).Z_phi_over_RQ;
    }
    pt.value = v;
    pts.push_back(pt);
  }
  const int nd = std::max(1, s.levels / 2);
  std::vector<std::string> cols{s.sweep_axis, "Z_phi_over_RQ", "ok", "E_alpha", "E_beta", "E_gamma",
                                "residual", "residual_over_E_alpha", "flux_residual", "max_high_harmonic",
                                "ansatz_warning", "gap_estimate", "gap_1d", "gap_2d"};
  for (int i = 0; i < nd; ++i) cols.push_back("split_1d_" + std::to_string(i));
  for (int i = 0; i < nd; ++i) cols.push_back("split_2d_" + std::to_string(i));
  cols.push_back("error");
  Table t(cols);
  Table pot({"point", "phi_ext", "theta", "E0", "fit_five_mode", "fit_two_harmonic"});
  Table lv({"point", "level", "E_1d", "E_2d"});
  std::vector<double> Z, Ea, Eb, Eg;
  bool warn = false;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const BoPoint& pt = pts[k];
    const auto& f = pt.fit;
    std::vector<Cell> row{pt.value, pt.Z_phi_over_RQ, pt.ok};
    if (pt.ok) {
      row.insert(row.end(), {f.E_alpha, f.E_beta, f.E_gamma, f.residual, f.residual / f.E_alpha, f.flux_residual,
                             f.max_high_harmonic, f.ansatz_warning, pt.gap_estimate, pt.gap_1d,
                             pt.levels_2d.size() ? pt.gap_2d : kNaN});
      Z.push_back(pt.Z_phi_over_RQ);
      Ea.push_back(f.E_alpha);
      Eb.push_back(f.E_beta);
      Eg.push_back(f.E_gamma);
      warn = warn || f.ansatz_warning;
    } else {
      for (int i = 0; i < 11; ++i) row.push_back(kNaN);
    }
    for (int i = 0; i < nd; ++i) row.push_back(at(pt.split_1d, i));
    for (int i = 0; i < nd; ++i) row.push_back(at(pt.split_2d, i));
    row.push_back(pt.error);
    t.add(row);
    if (!pt.ok) continue;
    for (std::size_t g = 0; g < f.curves.size(); ++g) {
      const BoCurve& c = f.curves[g];
      const FourierFit& ff = f.fits[g];
      for (Index i = 0; i < c.theta.size(); ++i) {
        double th = c.theta(i), five = ff.c0;
        for (Index h = 0; h < ff.a.size(); ++h)
          five += ff.a(h) * std::cos((h + 1) * th) + ff.b(h) * std::sin((h + 1) * th);
        pot.add({static_cast<long long>(k), c.phi_ext, th, c.energy(i), five, f.potential(th, c.phi_ext)});
      }
    }
    for (Index i = 0; i < pt.levels_1d.size(); ++i)
      lv.add({static_cast<long long>(k), static_cast<long long>(i), pt.levels_1d(i),
              i < pt.levels_2d.size() ? pt.levels_2d(i) : kNaN});
  }
  w.write_table("bo_fit", t);
  w.write_table("bo_potential", pot);
  w.write_table("bo_levels", lv);
  w.tolerance("accept_ratio", s.fit.accept_ratio);
  w.tolerance("breakdown_ratio", s.fit.breakdown_ratio);
  w.validity("all_points_accepted", static_cast<std::size_t>(Ea.size()) == pts.size());
  w.validity("ansatz", !warn);
  if (warn) w.warning("Fourier coefficients beyond order 4 exceed the breakdown ratio");
  if (Ea.size() >= 2) {
    LineFit fb = log_log_fit(Z, Eb), fg = log_log_fit(Z, Eg);
    auto [lo, hi] = std::minmax_element(Ea.begin(), Ea.end());
    w.meta()["trend"] = {{"E_beta_slope", fb.slope},   {"E_beta_r2", fb.r2},
                         {"E_gamma_slope", fg.slope},  {"E_gamma_r2", fg.r2},
                         {"E_alpha_variation", (*hi - *lo) / *lo}};
  }
}

void cmd_dispersive(const RunConfig& cfg, RunWriter& w) {
  const auto& s = cfg.dispersive;
  DispersiveModel dm = dispersive_model(cfg.circuit, cfg.basis, s.setup);
  std::vector<double> grid = default_raman_grid(s.points, s.omega_r_min, s.omega_r_max);
  StraddlingScan scan = straddling_scan(dm.g, dm.levels, grid, s.setup.n_bar, s.setup.ratio_threshold, cfg.workers);
  units::Scale sc{cfg.circuit.omega_p_over_2pi};
  Table t({"omega_r", "omega_r_hz", "valid", "chi", "chi_hz", "chi_0", "chi_1"});
  for (std::size_t k = 0; k < grid.size(); ++k)
    t.add({scan.omega_r[k], sc.to_hz(scan.omega_r[k]), static_cast<bool>(scan.valid[k]), scan.chi[k],
           sc.to_hz(scan.chi[k]), scan.chi_0[k], scan.chi_1[k]});
  w.write_table("dispersive_scan", t);
  Table lv({"level", "energy"});
  for (Index i = 0; i < dm.levels.size(); ++i) lv.add({static_cast<long long>(i), dm.levels(i)});
  w.write_table("dispersive_levels", lv);
  w.tolerance("ratio_threshold", s.setup.ratio_threshold);
  w.validity("weak_coupling", !dm.weak_coupling_warning);
  if (dm.weak_coupling_warning) w.warning("C_g/C_mu above 0.3");
  if (scan.best >= 0)
    w.meta()["best"] = {{"omega_r", scan.omega_r[scan.best]}, {"chi", scan.chi[scan.best]},
                        {"chi_hz", sc.to_hz(scan.chi[scan.best])}};
  w.validity("any_valid_point", scan.best >= 0);
}

Json gate_json(const GateModel& m, const OptimizedGate& g) {
  const GateResult& r = g.result;
  Json u = Json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) u.push_back({r.u_closest(i, j).real(), r.u_closest(i, j).imag()});
  return {{"omega", m.omega_of(g.pulse.amplitude)}, {"eV", g.pulse.amplitude}, {"t_gate", g.pulse.t_gate},
          {"fidelity", r.fidelity},  {"distance", r.distance},    {"leakage", r.leakage},
          {"phi_xz", r.phi_xz},      {"phi_xy", r.phi_xy},        {"rotation", r.rotation},
          {"hyperbola", r.hyperbola}, {"unitarity_defect", r.unitarity_defect},
          {"evaluations", g.evaluations}, {"u_closest", u}};
}

void cmd_gate_optimize(const RunConfig& cfg, RunWriter& w) {
  GateModel m(cfg.circuit, cfg.basis, cfg.gate.M);
  OptimizedGate g = optimize_pulse(m, cfg.gate.box, cfg.workers);
  Excursion ex = multilevel_excursion(m, g.pulse, cfg.gate.excursion_samples, cfg.gate.excursion_threshold);
  const GateResult& r = g.result;
  Table t({"omega", "eV", "t_gate", "fidelity", "distance", "leakage", "phi_xz", "phi_xy", "rotation", "hyperbola",
           "unitarity_defect", "occupied_doublets", "evaluations"});
  t.add({m.omega_of(g.pulse.amplitude), g.pulse.amplitude, g.pulse.t_gate, r.fidelity, r.distance, r.leakage,
         r.phi_xz, r.phi_xy, r.rotation, r.hyperbola, r.unitarity_defect,
         static_cast<long long>(ex.occupied_doublets), static_cast<long long>(g.evaluations)});
  w.write_table("gate", t);
  std::vector<std::string> cols{"t"};
  for (int i = 0; i < m.levels(); ++i) cols.push_back("pop_" + std::to_string(i));
  Table e(cols);
  for (std::size_t k = 0; k < ex.t.size(); ++k) {
    std::vector<Cell> row{ex.t[k]};
    for (int i = 0; i < m.levels(); ++i) row.push_back(ex.populations(k, i));
    e.add(row);
  }
  w.write_table("gate_excursion", e);
  w.meta()["gate"] = gate_json(m, g);
  w.tolerance("unitarity", 1e-9);
  w.validity("unitarity", r.unitarity_defect < 1e-9);
  w.validity("rotation_near_pi", !r.rotation_flag);
  w.validity("excursion_norm", ex.max_norm_error < 1e-9);
}

void cmd_gate_map(const RunConfig& cfg, RunWriter& w) {
  const auto& s = cfg.gate_map;
  auto pts = gate_parameter_map(cfg.circuit, s.E_J, s.E_C_theta, cfg.basis, cfg.gate.M, cfg.gate.box, cfg.workers);
  Table t({"E_J", "E_C_theta", "ok", "fidelity", "distance", "phi_xz", "phi_xy", "omega", "t_gate", "hyperbola",
           "occupied_doublets", "error"});
  for (const auto& p : pts)
    t.add({p.E_J, p.E_C_theta, p.ok, p.fidelity, p.distance, p.phi_xz, p.phi_xy, p.omega, p.t_gate, p.hyperbola,
           static_cast<long long>(p.occupied_doublets), p.error});
  w.write_table("gate_map", t);
  MonotoneReport m = xz_monotone(pts, s.E_J.size(), s.E_C_theta.size(), s.monotone_tolerance);
  w.tolerance("monotone_tolerance", s.monotone_tolerance);
  w.validity("monotone", m.monotone);
  w.validity("spans_x_to_z", m.spans_x_to_z);
  w.meta()["monotone"] = {{"violations", m.violations}, {"failed_points", m.failed_points},
                          {"x_corner", m.x_corner}, {"z_corner", m.z_corner}};
}

void cmd_gate_robustness(const RunConfig& cfg, RunWriter& w) {
  const auto& s = cfg.robustness;
  GateModel m(cfg.circuit, cfg.basis, cfg.gate.M);
  OptimizedGate g = optimize_pulse(m, cfg.gate.box, cfg.workers);
  w.meta()["gate"] = gate_json(m, g);
  Table t({"axis", "value", "ok", "fidelity", "relative_change", "leakage", "error"});
  for (const auto& axis : s.axes) {
    std::vector<double> grid;
    if (axis == "sigma")
      for (double f : s.sigma_fraction) grid.push_back(f * g.pulse.t_gate);
    else if (axis == "phi_ext")
      grid = s.phi_ext;
    else if (axis == "dE_J")
      grid = s.dE_J;
    else
      grid = s.dC_J;
    auto pts = robustness_scan(m, g, axis, grid, cfg.workers);
    double worst = 0.0;
    bool all = true;
    for (const auto& p : pts) {
      t.add({axis, p.value, p.ok, p.fidelity, p.relative_change, p.leakage, p.error});
      if (p.ok) worst = std::max(worst, std::abs(p.relative_change));
      all = all && p.ok;
    }
    w.meta()["max_relative_change"][axis] = worst;
    w.validity("axis_" + axis, all);
  }
  w.write_table("gate_robustness", t);
}

RamanConfig raman_config(const RamanSection& s, const RamanSystem& sys) {
  RamanConfig c;
  c.M = s.M;
  c.default_gamma = s.default_gamma;
  c.off_resonance_ratio = s.off_resonance_ratio;
  double amp = s.rabi > 0.0 ? amplitude_for_rabi(sys, s.rabi, s.M) : s.amplitude;
  if (!(amp > 0.0)) throw InvalidParameters("Raman drive needs raman.rabi or raman.amplitude > 0");
  c.drives.push_back({0.0, amp, 0.0});
  return c;
}

void cmd_raman(const RunConfig& cfg, RunWriter& w) {
  const auto& s = cfg.raman;
  RamanSystem sys = raman_system(cfg.circuit, cfg.basis, s.mode, s.M);
  RamanConfig rc = raman_config(s, sys);
  std::vector<double> grid = default_raman_grid(s.points, s.omega_min, s.omega_max);
  RatioScan scan = optimize_ratio(rc, sys, grid, cfg.workers);
  Table t({"omega", "admissible", "ratio"});
  for (std::size_t k = 0; k < scan.omega.size(); ++k)
    t.add({scan.omega[k], static_cast<bool>(scan.admissible[k]), scan.ratio[k]});
  w.write_table("raman_scan", t);
  RamanConfig best = rc;
  best.drives[0].omega = scan.best_omega;
  EffectiveH h = effective_h_single(best, sys);
  units::Scale sc{cfg.circuit.omega_p_over_2pi};
  w.meta()["best"] = {{"omega", scan.best_omega},   {"ratio", scan.best_ratio},
                      {"delta_x", h.delta_x},       {"delta_z", h.delta_z},
                      {"amplitude_eV", rc.drives[0].amplitude},
                      {"amplitude_volts", sc.volts_from_ev(rc.drives[0].amplitude)}};
  w.tolerance("off_resonance_ratio", s.off_resonance_ratio);
  w.validity("ratio_below_1e-4", scan.best_ratio < 1e-4);
  if (!s.flux_grid.empty()) {
    auto pts = raman_flux_scan(cfg.circuit, s.flux_grid, cfg.basis, s.mode, rc, grid, cfg.workers);
    Table f({"phi_ext", "ok", "best_omega", "best_ratio", "error"});
    for (const auto& p : pts) f.add({p.phi_ext, p.ok, p.best_omega, p.best_ratio, p.error});
    w.write_table("raman_flux", f);
  }
  if (!s.E_J.empty()) {
    auto pts = raman_parameter_map(cfg.circuit, s.E_J, s.E_C_theta, cfg.basis, s.mode, rc, grid, cfg.workers);
    Table f({"E_J", "E_C_theta", "ok", "best_omega", "best_ratio", "error"});
    for (const auto& p : pts) f.add({p.E_J, p.E_C_theta, p.ok, p.best_omega, p.best_ratio, p.error});
    w.write_table("raman_map", f);
  }
}

void cmd_cooling(const RunConfig& cfg, RunWriter& w) {
  const auto& s = cfg.cooling;
  CoolingSweepSetup setup = s.setup;
  if (setup.E_L.empty()) setup.E_L.push_back(cfg.circuit.E_L);
  auto pts = cooling_sweep(cfg.circuit, cfg.basis, setup, cfg.workers);
  units::Scale sc{cfg.circuit.omega_p_over_2pi};
  Table t({"E_L", "Z_phi_over_RQ", "ok", "omega_zeta", "omega_zeta_hz", "g_bar", "kappa_zeta", "chi01", "g_prime",
           "gamma_down", "gamma_up", "gamma_cooling", "n_th", "n_ss_cooled", "T_phi_SN_cooled", "T_phi_SN_uncooled",
           "T_phi_SN_cooled_s", "T_phi_SN_uncooled_s", "T_ratio", "valid", "error"});
  bool valid = true;
  for (const auto& p : pts) {
    const auto& c = p.cooled;
    t.add({p.E_L, p.Z_phi_over_RQ, p.ok, p.omega_zeta, sc.to_hz(p.omega_zeta), p.g_bar, p.kappa_zeta, p.chi.chi01,
           c.g_prime, c.gamma_down, c.gamma_up, c.gamma_cooling, c.n_th, c.n_ss, c.T_phi_SN, p.uncooled.T_phi_SN,
           sc.to_seconds(c.T_phi_SN), sc.to_seconds(p.uncooled.T_phi_SN), p.T_ratio, c.validity.all(), p.error});
    if (p.ok && !c.validity.all()) {
      valid = false;
      for (const auto& m : c.validity.warnings()) w.warning("E_L = " + format_double(p.E_L) + ": " + m);
    }
  }
  w.write_table("cooling_sweep", t);
  TrendReport tr = cooling_trend(pts, s.slope_fraction);
  w.meta()["trend"] = {{"non_decreasing", tr.non_decreasing}, {"saturating", tr.saturating},
                       {"min_ratio", tr.min_ratio},           {"max_ratio", tr.max_ratio},
                       {"max_slope", tr.max_slope},           {"last_slope", tr.last_slope}};
  w.tolerance("slope_fraction", s.slope_fraction);
  w.validity("rate_assumptions", valid);
}

void cmd_validate(const RunConfig& cfg, RunWriter& w) {
  const auto& v = cfg.validate;
  FullMEReport me = validate_full_vs_reduced(v.me, v.me_options);
  Table t({"t", "n_zeta_full", "n_zeta_reduced", "n_b"});
  for (std::size_t k = 0; k < me.t.size(); ++k) t.add({me.t[k], me.n_zeta_t[k], me.n_reduced_t[k], me.n_b_t[k]});
  w.write_table("validate_me", t);
  SidebandRates r = sideband_rates(v.rates, true, v.n_max);
  double dd = std::abs(r.gamma_down_full - r.gamma_down) / r.gamma_down_full;
  double du = std::abs(r.gamma_up_full - r.gamma_up) / r.gamma_up_full;
  Table rt({"quantity", "simplified", "full", "relative_difference"});
  rt.add({std::string("gamma_down"), r.gamma_down, r.gamma_down_full, dd});
  rt.add({std::string("gamma_up"), r.gamma_up, r.gamma_up_full, du});
  w.write_table("validate_rates", rt);
  w.meta()["master_equation"] = {{"n_full", me.n_full},
                                 {"n_reduced", me.n_reduced},
                                 {"relative_discrepancy", me.relative_discrepancy},
                                 {"max_trajectory_discrepancy", me.max_trajectory_discrepancy},
                                 {"max_b_occupation", me.max_b_occupation},
                                 {"max_trace_error", me.max_trace_error}};
  w.meta()["rates"] = {{"g_prime", r.g_prime}, {"tail_bound", r.tail_bound}, {"n_max", r.n_max}};
  w.tolerance("me_relative", 0.1);
  w.tolerance("rates_relative", 0.05);
  w.tolerance("trace", 1e-8);
  w.validity("me_within_tolerance", me.relative_discrepancy < 0.1);
  w.validity("me_assumptions", me.valid);
  w.validity("rates_within_tolerance", dd < 0.05 && du < 0.05);
  w.validity("trace", me.max_trace_error < 1e-8);
}

}  // namespace

void run_command(const RunConfig& cfg) {
  RunWriter w(cfg);
  const std::string& c = cfg.command;
  if (c == "spectrum")
    cmd_spectrum(cfg, w);
  else if (c == "bo-fit")
    cmd_bo_fit(cfg, w);
  else if (c == "dispersive-scan")
    cmd_dispersive(cfg, w);
  else if (c == "gate-optimize")
    cmd_gate_optimize(cfg, w);
  else if (c == "gate-map")
    cmd_gate_map(cfg, w);
  else if (c == "gate-robustness")
    cmd_gate_robustness(cfg, w);
  else if (c == "raman-scan")
    cmd_raman(cfg, w);
  else if (c == "cooling-sweep")
    cmd_cooling(cfg, w);
  else if (c == "validate")
    cmd_validate(cfg, w);
  else
    throw ConfigError("unknown command '" + c + "'");
  w.metadata();
}

}  // namespace zp
