#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zeropi/commands.hpp"
#include "zeropi/config.hpp"
#include "zeropi/dispersive.hpp"
#include "zeropi/dynamics.hpp"
#include "zeropi/gate.hpp"
#include "zeropi/raman.hpp"

using namespace zp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Detail {
  std::ostringstream s;
  template <class T>
  Detail& kv(const std::string& k, const T& v) {
    if (s.tellp() > 0) s << ", ";
    s << k << "=" << v;
    return *this;
  }
  Detail& num(const std::string& k, double v) { return kv(k, fmt("%.4g", v)); }
  std::string str() const { return s.str(); }
};

bool within(double value, double ref, double rel) { return std::abs(value - ref) <= rel * std::abs(ref); }

int workers = 0;

// shared between criteria
struct Shared {
  bool have_anchor = false;
  BoPoint anchor;
  bool have_gate = false;
  RunConfig gate_cfg;
  std::unique_ptr<GateModel> gate_model;
  OptimizedGate gate;
} shared;

const BoPoint& anchor_point() {
  if (!shared.have_anchor) {
    RunConfig c = load_config("fig7", "", {});
    shared.anchor = bo_point(c.circuit, c.basis, c.bo_fit, workers);
    if (!shared.anchor.ok) throw NumericalError("anchor fit failed: " + shared.anchor.error);
    shared.have_anchor = true;
  }
  return shared.anchor;
}

void ensure_gate() {
  if (shared.have_gate) return;
  shared.gate_cfg = load_config("fig5", "", {});
  const RunConfig& c = shared.gate_cfg;
  shared.gate_model = std::make_unique<GateModel>(c.circuit, c.basis, c.gate.M);
  shared.gate = optimize_pulse(*shared.gate_model, c.gate.box, workers);
  shared.have_gate = true;
}

Outcome criterion1() {
  const auto& f = anchor_point().fit;
  bool a = within(f.E_alpha, 1.8608e-2, 0.02);
  bool g = within(f.E_gamma, 2.6625e-5, 0.10);
  double lb = std::abs(std::log10(std::abs(f.E_beta) / 1.0073e-8));
  bool b = f.E_beta > 0.0 && lb < 1.0;
  Detail d;
  d.num("E_alpha", f.E_alpha).num("dev", f.E_alpha / 1.8608e-2 - 1.0);
  d.num("E_gamma", f.E_gamma).num("dev", f.E_gamma / 2.6625e-5 - 1.0);
  d.num("E_beta", f.E_beta).num("log10_dev", lb);
  return {a && g && b, d.str()};
}

Outcome criterion2() {
  const auto& p = anchor_point();
  if (p.split_1d.size() < 3 || p.split_2d.size() < 3) return {false, "fewer than three doublets"};
  bool ok = true;
  Detail d;
  for (int k = 0; k < 3; ++k) {
    double r = p.split_1d[k] / p.split_2d[k] - 1.0;
    ok = ok && std::abs(r) < 0.10;
    d.num("doublet" + std::to_string(k) + "_1d", p.split_1d[k]).num("2d", p.split_2d[k]).num("dev", r);
  }
  return {ok, d.str()};
}

Outcome criterion3() {
  RunConfig c = load_config("fig2", "", {});
  std::vector<double> z, eb, eg, ea;
  int failed = 0;
  for (double v : c.bo_fit.sweep) {
    CircuitParams p = c.circuit;
    set_named_param(p, c.bo_fit.sweep_axis, v);
    p.sync_capacitances();
    BoPoint b = bo_point(p, c.basis, c.bo_fit, workers);
    if (!b.ok) {
      ++failed;
      continue;
    }
    z.push_back(b.Z_phi_over_RQ);
    eb.push_back(b.fit.E_beta);
    eg.push_back(b.fit.E_gamma);
    ea.push_back(b.fit.E_alpha);
  }
  if (z.size() < 3) return {false, "too few fitted points"};
  LineFit fb = log_log_fit(z, eb), fg = log_log_fit(z, eg);
  auto [lo, hi] = std::minmax_element(ea.begin(), ea.end());
  double var = (*hi - *lo) / *lo;
  bool ok = failed == 0 && fb.slope < 0.0 && fg.slope < 0.0 && fb.r2 > 0.9 && fg.r2 > 0.9 && var < 0.5 &&
            fb.points == static_cast<int>(z.size()) && fg.points == static_cast<int>(z.size());
  Detail d;
  d.kv("points", z.size()).kv("failed", failed);
  d.num("beta_slope", fb.slope).num("beta_r2", fb.r2).num("gamma_slope", fg.slope).num("gamma_r2", fg.r2);
  d.num("E_alpha_variation", var);
  return {ok, d.str()};
}

Outcome criterion4() {
  const auto& p = anchor_point();
  double r = p.gap_2d / p.gap_estimate - 1.0;
  Detail d;
  d.num("gap_2d", p.gap_2d).num("gap_1d", p.gap_1d).num("estimate", p.gap_estimate).num("dev", r);
  return {std::abs(r) < 0.25, d.str()};
}

Outcome criterion5() {
  ensure_gate();
  const auto& r = shared.gate.result;
  bool head = r.fidelity >= 0.999 && r.phi_xy < 1e-4 && std::abs(r.hyperbola - 1.0) < 0.1;
  const RunConfig& c = shared.gate_cfg;
  auto pts = gate_parameter_map(c.circuit, c.gate_map.E_J, c.gate_map.E_C_theta, c.basis, c.gate.M, c.gate.box,
                                workers);
  MonotoneReport m = xz_monotone(pts, c.gate_map.E_J.size(), c.gate_map.E_C_theta.size(), c.gate_map.monotone_tolerance);
  Detail d;
  d.num("fidelity", r.fidelity).num("phi_xy", r.phi_xy).num("hyperbola", r.hyperbola);
  d.num("omega", shared.gate_model->omega_of(shared.gate.pulse.amplitude)).num("t_g", shared.gate.pulse.t_gate);
  d.kv("map_monotone", m.monotone).kv("spans_X_to_Z", m.spans_x_to_z).num("X_corner", m.x_corner);
  d.num("Z_corner", m.z_corner).kv("failed_points", m.failed_points);
  return {head && m.monotone && m.spans_x_to_z && m.failed_points == 0, d.str()};
}

Outcome criterion6() {
  ensure_gate();
  const RunConfig& c = shared.gate_cfg;
  std::vector<double> sig;
  for (double f : c.robustness.sigma_fraction) sig.push_back(f * shared.gate.pulse.t_gate);
  auto s = robustness_scan(*shared.gate_model, shared.gate, "sigma", sig, workers);
  double worst = 0.0;
  bool all = true;
  for (const auto& p : s) {
    all = all && p.ok;
    worst = std::max(worst, std::abs(p.relative_change));
  }
  auto ej = robustness_scan(*shared.gate_model, shared.gate, "dE_J", {0.05}, workers);
  auto cj = robustness_scan(*shared.gate_model, shared.gate, "dC_J", {0.05}, workers);
  bool ok_d = ej[0].ok && cj[0].ok;
  double e = std::abs(ej[0].relative_change), cc = std::abs(cj[0].relative_change);
  Detail d;
  d.num("sigma_max_relative_change", worst).num("dE_J_5pct", e).num("dC_J_5pct", cc);
  d.num("ratio", e > 0.0 ? cc / e : std::numeric_limits<double>::infinity());
  return {all && ok_d && worst < 1e-3 && cc >= 10.0 * e, d.str()};
}

Outcome criterion7() {
  // closed-form three-level check
  RamanSystem t;
  t.levels = VecR(3);
  t.levels << 0.0, 1e-3, 0.6;
  t.n = MatC::Zero(3, 3);
  t.n(2, 0) = cplx(0.7, 0.2);
  t.n(2, 1) = cplx(-0.1, 0.5);
  t.n(0, 2) = std::conj(t.n(2, 0));
  t.n(1, 2) = std::conj(t.n(2, 1));
  t.coupling_ratio = 0.25;
  RamanConfig tc;
  tc.M = 3;
  tc.default_gamma = 0.0;
  tc.drives = {{0.35, 4e-3, 0.3}};
  EffectiveH e = effective_h_single(tc, t);
  cplx o02 = 0.25 * 4e-3 * std::polar(1.0, -0.3) * t.n(2, 0), o12 = 0.25 * 4e-3 * std::polar(1.0, -0.3) * t.n(2, 1);
  cplx h01 = -0.5 * std::conj(o02) * o12 * (1.0 / (0.6 - 0.35) + 1.0 / (0.6 - 1e-3 - 0.35));
  double oracle_err = std::abs(e.H(0, 1) - h01) / std::abs(h01);

  RunConfig c = load_config("fig8", "", {});
  RamanSystem sys = raman_system(c.circuit, c.basis, c.raman.mode, c.raman.M);
  std::vector<double> grid = default_raman_grid(c.raman.points, c.raman.omega_min, c.raman.omega_max);
  Detail d;
  d.num("oracle_rel_err", oracle_err);
  double best = 0.0;
  for (double rabi : {1e-5, 1e-4, 1e-3}) {
    RamanConfig rc;
    rc.M = c.raman.M;
    rc.default_gamma = c.raman.default_gamma;
    rc.off_resonance_ratio = c.raman.off_resonance_ratio;
    rc.drives = {{0.0, amplitude_for_rabi(sys, rabi, c.raman.M), 0.0}};
    RatioScan s = optimize_ratio(rc, sys, grid, workers);
    d.num("max_ratio@rabi" + fmt("%g", rabi), s.best_ratio);
    if (rabi == c.raman.rabi) {
      best = s.best_ratio;
      d.num("best_omega", s.best_omega);
    }
  }
  return {oracle_err < 1e-10 && best < 1e-4, d.str()};
}

Outcome criterion8() {
  RunConfig c = load_config("", "", {});
  const auto& v = c.validate;
  FullMEReport me = validate_full_vs_reduced(v.me, v.me_options);
  SidebandRates r = sideband_rates(v.rates, true, v.n_max);
  double dd = std::abs(r.gamma_down_full / r.gamma_down - 1.0), du = std::abs(r.gamma_up_full / r.gamma_up - 1.0);
  double gp = effective_coupling(v.me);
  bool regime = v.me.n_th <= 3.0 && v.me.kappa_b / std::abs(gp) >= 10.0 && me.valid;
  Detail d;
  d.num("n_full", me.n_full).num("n_reduced", me.n_reduced).num("me_dev", me.relative_discrepancy);
  d.num("kappa_b/g'", v.me.kappa_b / std::abs(gp)).num("trace_err", me.max_trace_error);
  d.num("gamma_down_dev", dd).num("gamma_up_dev", du);
  return {regime && me.relative_discrepancy < 0.1 && dd < 0.05 && du < 0.05, d.str()};
}

Outcome criterion9() {
  RunConfig c = load_config("fig10", "", {});
  auto pts = cooling_sweep(c.circuit, c.basis, c.cooling.setup, workers);
  TrendReport t = cooling_trend(pts, c.cooling.slope_fraction);
  int failed = 0;
  for (const auto& p : pts) failed += !p.ok;
  Detail d;
  d.kv("points", pts.size()).kv("failed", failed).num("min_ratio", t.min_ratio).num("max_ratio", t.max_ratio);
  d.kv("non_decreasing", t.non_decreasing).kv("saturating", t.saturating);
  d.num("last_slope/max_slope", t.max_slope > 0.0 ? t.last_slope / t.max_slope : 0.0);
  bool ok = failed == 0 && t.min_ratio >= 10.0 && t.max_ratio <= 3000.0 && t.non_decreasing && t.saturating;
  return {ok, d.str()};
}

Outcome criterion10() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto herm = [&](int n) {
    MatC a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = cplx(u(rng), u(rng));
    return MatC(0.5 * (a + a.adjoint()));
  };
  Detail d;
  bool ok = true;

  CircuitParams p = CircuitParams::from_energies(0.165, 1e-3, 1.75e-4, 0.378);
  p.dE_J = 0.02;
  p.dC_J = 0.03;
  p.dC = 0.01;
  p.dE_L = 0.02;
  p.dC_g = {0.01, 0.0, -0.01, 0.02};
  p.phi_ext = 0.3;
  p.n_g_theta = 0.2;
  BasisSpec b{8, 20, 3, 3, 1};
  ModeSet all{true, true, true};
  double herm_defect =
      (build_h_symm(p, b, all) + build_h_asymm(p, b, all) + build_h_dcg_dc0(p, b, all)).hermiticity_defect();
  ok = ok && herm_defect < 1e-12;
  d.num("hermiticity", herm_defect);

  PulseSpec ps;
  ps.amplitude = 0.3;
  ps.t_gate = 3.0;
  ps.shape = PulseShape::tanh;
  ps.sigma = 0.3;
  double unit = propagate_unitary(herm(8), herm(8), ps).unitarity_defect;
  ok = ok && unit < 1e-9;
  d.num("unitarity", unit);

  LindbladSpec ls;
  ls.hamiltonian = herm(5);
  ls.collapse.push_back({herm(5) + kI * herm(5), 0.1, "c"});
  MatC rho = MatC::Zero(5, 5);
  rho(0, 0) = 1.0;
  LindbladOptions lo;
  lo.dt = 0.002;
  double trace = lindblad_propagate(ls, rho, {0.0, 1.0}, lo).max_trace_error;
  ok = ok && trace < 1e-8;
  d.num("trace", trace);

  Eigen::Matrix4d T = normal_mode_matrix();
  Eigen::Matrix4d G = T * T.transpose();
  bool orth = true;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && G(i, j) != 0.0) orth = false;
  ok = ok && orth;
  d.kv("orthogonal", orth);

  CircuitParams q = CircuitParams::from_energies(0.165, 1e-3, 1.75e-4, 0.378);
  q.n_g_theta = 0.3;
  q.phi_ext = 0.7;
  BasisSpec pb{30, 60};
  VecR e0 = diagonalize(ThetaPhiModel(q, pb), 4).eigenvalues;
  CircuitParams q1 = q, q2 = q;
  q1.n_g_theta += 1.0;
  q2.phi_ext += 2.0 * kPi;
  VecR e1 = diagonalize(ThetaPhiModel(q1, pb), 4).eigenvalues, e2 = diagonalize(ThetaPhiModel(q2, pb), 4).eigenvalues;
  double per = 0.0;
  for (int i = 0; i < 4; ++i)
    per = std::max({per, std::abs(e1(i) - e0(i)) / std::abs(e0(i)), std::abs(e2(i) - e0(i)) / std::abs(e0(i))});
  ok = ok && per < 1e-8;
  d.num("periodicity", per);

  MatC g = MatC::Zero(2, 2);
  g(0, 1) = g(1, 0) = 1.3e-3;
  VecR lv(2);
  lv << 0.0, 0.3;
  double chi = dispersive_shifts(g, lv, 0.17).chi_qubit;
  double expected = 1.3e-3 * 1.3e-3 * (1.0 / (0.3 - 0.17) + 1.0 / (0.3 + 0.17));
  double derr = std::abs(chi - expected) / std::abs(expected);
  ok = ok && derr < 1e-10;
  d.num("dispersive_oracle", derr);
  return {ok, d.str()};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> c{
      {"effective-model coefficients", criterion1},
      {"1D/2D doublet splittings", criterion2},
      {"exponential suppression trend", criterion3},
      {"doublet gap estimate", criterion4},
      {"gate headline numbers and X->Z map", criterion5},
      {"gate robustness", criterion6},
      {"Raman suppression and three-level oracle", criterion7},
      {"cooling formulas vs master equation", criterion8},
      {"cooling improvement trend", criterion9},
      {"property suite", criterion10},
  };
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string report;
  bool strict = false;
  std::vector<int> only;
  app.add_option("--report", report, "write the result lines to this file");
  app.add_flag("--strict", strict, "exit code is the number of failed criteria");
  app.add_option("--only", only, "criterion numbers to run");
  app.add_option("--workers", workers, "worker threads (0: all cores)");
  CLI11_PARSE(app, argc, argv);

  std::set<int> pick(only.begin(), only.end());
  std::vector<std::string> lines;
  int failures = 0, errors = 0;
  const auto& list = criteria();
  for (std::size_t k = 0; k < list.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!pick.empty() && !pick.count(id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = list[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
      ++errors;
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::string line = std::string(o.pass ? "[PASS] " : "[FAIL] ") + std::to_string(id) + " " + list[k].first +
                       ": " + o.detail + " (" + fmt("%.1f", sec) + " s)";
    std::cout << line << std::endl;
    lines.push_back(line);
  }
  std::string summary = std::to_string(lines.size() - failures) + "/" + std::to_string(lines.size()) + " criteria passed";
  std::cout << summary << std::endl;
  if (!report.empty()) {
    std::ofstream out(report);
    for (const auto& l : lines) out << l << "\n";
    out << summary << "\n";
  }
  if (strict) return failures;
  return errors > 0 ? 1 : 0;
}
