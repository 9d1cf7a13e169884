#include "zeropi/raman.hpp"

#include <algorithm>
#include <cmath>

#include "zeropi/parallel.hpp"

namespace zp {

double RamanConfig::gamma(int j) const {
  double g0 = j < static_cast<int>(gamma0.size()) ? gamma0[j] : 0.5 * default_gamma;
  double g1 = j < static_cast<int>(gamma1.size()) ? gamma1[j] : 0.5 * default_gamma;
  if (g0 < 0.0 || g1 < 0.0) throw InvalidParameters("decay rates must be non-negative");
  return g0 + g1;
}

RamanSystem raman_system(const CircuitParams& p, const BasisSpec& b, Mode mode, int M) {
  if (M < 3) throw InvalidParameters("Raman analysis needs at least three levels");
  ThetaPhiModel m(p, b);
  Spectrum s = diagonalize(m, M);
  ModeCapacitances c = mode_capacitances(p);
  RamanSystem sys;
  sys.levels = s.eigenvalues.array() - s.eigenvalues(0);
  switch (mode) {
    case Mode::theta:
      sys.n = n_theta_table(m, s, M);
      sys.coupling_ratio = p.C_g / c.theta;
      break;
    case Mode::phi:
      sys.n = n_phi_table(m, s, M);
      sys.coupling_ratio = p.C_g / c.phi;
      break;
    default:
      throw InvalidParameters("Raman drive must address theta or phi");
  }
  return sys;
}

double amplitude_for_rabi(const RamanSystem& sys, double rabi, int M) {
  M = std::min<int>(M, static_cast<int>(sys.n.rows()));
  double nmax = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 2; j < M; ++j) nmax = std::max(nmax, std::abs(sys.n(j, i)));
  if (nmax == 0.0 || sys.coupling_ratio == 0.0) throw InvalidParameters("drive does not couple the logical states");
  return rabi / (sys.coupling_ratio * nmax);
}

namespace {

int level_count(const RamanConfig& cfg, const RamanSystem& sys) {
  if (sys.n.rows() != sys.n.cols() || sys.levels.size() < sys.n.rows())
    throw InvalidParameters("Raman system levels and drive table disagree");
  int M = std::min<int>(cfg.M, static_cast<int>(sys.n.rows()));
  if (M < 3) throw InvalidParameters("Raman analysis needs at least three levels");
  return M;
}

// Omega_ij for one drive, i = 0, 1 and j < M
cplx omega_ij(const RamanDrive& d, const RamanSystem& sys, int i, int j) {
  return sys.coupling_ratio * d.amplitude * std::polar(1.0, -d.phase) * sys.n(j, i);
}

double detuning(const RamanSystem& sys, int j, int i, double w) {
  return (sys.levels(j) - sys.levels(i)) - w;
}

// -1/2 sum_j conj(Om^k_ij) Om^l_i'j [D_ji(k) + D_ji'(l)] / ([i g/2 + D_ji(k)][-i g/2 + D_ji'(l)])
Mat2c pair_term(const RamanConfig& cfg, const RamanSystem& sys, int M, const RamanDrive& k,
                const RamanDrive& l) {
  Mat2c h = Mat2c::Zero();
  for (int j = 2; j < M; ++j) {
    const double g = cfg.gamma(j);
    for (int i = 0; i < 2; ++i)
      for (int ip = 0; ip < 2; ++ip) {
        double dk = detuning(sys, j, i, k.omega);
        double dl = detuning(sys, j, ip, l.omega);
        cplx num = std::conj(omega_ij(k, sys, i, j)) * omega_ij(l, sys, ip, j) * (dk + dl);
        cplx den = cplx(dk, 0.5 * g) * cplx(dl, -0.5 * g);
        h(i, ip) -= 0.5 * num / den;
      }
  }
  return h;
}

EffectiveH finish(const Mat2c& h) {
  EffectiveH e;
  e.H = h;
  e.delta_z = (h(1, 1) - h(0, 0)).real();
  e.delta_x = 2.0 * std::abs(h(0, 1));
  e.xy_phase = std::arg(h(0, 1));
  return e;
}

Mat2c bare(const RamanSystem& sys) {
  Mat2c h = Mat2c::Zero();
  h(0, 0) = sys.levels(0);
  h(1, 1) = sys.levels(1);
  return h;
}

std::vector<RamanDrive> merge_equal_frequencies(const std::vector<RamanDrive>& drives) {
  std::vector<RamanDrive> out;
  std::vector<cplx> amp;
  for (const auto& d : drives) {
    auto it = std::find_if(out.begin(), out.end(), [&](const RamanDrive& o) { return o.omega == d.omega; });
    cplx a = d.amplitude * std::polar(1.0, -d.phase);
    if (it == out.end()) {
      out.push_back(d);
      amp.push_back(a);
    } else {
      amp[it - out.begin()] += a;
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].amplitude = std::abs(amp[k]);
    out[k].phase = out[k].amplitude > 0.0 ? -std::arg(amp[k]) : 0.0;
  }
  return out;
}

}  // namespace

void check_off_resonance(const RamanConfig& cfg, const RamanSystem& sys) {
  const int M = level_count(cfg, sys);
  for (const auto& d : cfg.drives)
    for (int i = 0; i < 2; ++i)
      for (int j = 2; j < M; ++j) {
        double om = std::abs(omega_ij(d, sys, i, j));
        if (om == 0.0) continue;
        if (!(std::abs(detuning(sys, j, i, d.omega)) >= cfg.off_resonance_ratio * om))
          throw RamanRejected("drive at omega " + std::to_string(d.omega) + " is too close to transition " +
                                  std::to_string(i) + " -> " + std::to_string(j),
                              i, j);
      }
}

EffectiveH effective_h_single(const RamanConfig& cfg, const RamanSystem& sys) {
  if (cfg.drives.size() != 1) throw InvalidParameters("single-tone analysis needs exactly one drive");
  check_off_resonance(cfg, sys);
  const int M = level_count(cfg, sys);
  return finish(bare(sys) + pair_term(cfg, sys, M, cfg.drives[0], cfg.drives[0]));
}

TwoToneH effective_h_two_tone(const RamanConfig& cfg, const RamanSystem& sys) {
  if (cfg.drives.empty()) throw InvalidParameters("two-tone analysis needs drives");
  check_off_resonance(cfg, sys);
  const int M = level_count(cfg, sys);
  std::vector<RamanDrive> d = merge_equal_frequencies(cfg.drives);
  TwoToneH out;
  Mat2c h = bare(sys);
  for (std::size_t k = 0; k < d.size(); ++k) h += pair_term(cfg, sys, M, d[k], d[k]);
  out.static_part = finish(h);
  for (std::size_t k = 0; k < d.size(); ++k)
    for (std::size_t l = 0; l < d.size(); ++l) {
      if (k == l) continue;
      CrossTerm c;
      c.k = static_cast<int>(k);
      c.l = static_cast<int>(l);
      c.frequency = d[k].omega - d[l].omega;
      c.H = pair_term(cfg, sys, M, d[k], d[l]);
      out.cross.push_back(c);
    }
  return out;
}

Mat2c two_tone_at(const TwoToneH& h, double t) {
  Mat2c out = h.static_part.H;
  for (const auto& c : h.cross) out += std::polar(1.0, c.frequency * t) * c.H;
  return out;
}

std::vector<double> default_raman_grid(int points, double lo, double hi) {
  if (points < 1 || !(hi >= lo)) throw InvalidParameters("invalid Raman frequency grid");
  std::vector<double> g(points);
  for (int k = 0; k < points; ++k) g[k] = points == 1 ? lo : lo + (hi - lo) * k / (points - 1);
  return g;
}

RatioScan optimize_ratio(const RamanConfig& cfg, const RamanSystem& sys, const std::vector<double>& omega_grid,
                         int workers) {
  if (cfg.drives.empty()) throw InvalidParameters("Raman scan needs a drive amplitude");
  struct Pt {
    bool ok = false;
    double ratio = std::numeric_limits<double>::quiet_NaN();
  };
  auto pts = parallel_map(omega_grid.size(), workers, [&](std::size_t k) {
    RamanConfig c = cfg;
    c.drives.resize(1);
    c.drives[0].omega = omega_grid[k];
    Pt p;
    try {
      p.ratio = effective_h_single(c, sys).ratio();
      p.ok = true;
    } catch (const RamanRejected&) {
    }
    return p;
  });
  RatioScan s;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    s.omega.push_back(omega_grid[k]);
    s.ratio.push_back(pts[k].ratio);
    s.admissible.push_back(pts[k].ok);
    if (pts[k].ok && (s.best < 0 || pts[k].ratio > s.best_ratio)) {
      s.best = static_cast<int>(k);
      s.best_ratio = pts[k].ratio;
      s.best_omega = omega_grid[k];
    }
  }
  if (s.best < 0) throw InvalidParameters("no admissible drive frequency in the Raman grid");
  return s;
}

PhaseScan two_tone_phase_scan(const RamanConfig& cfg, const RamanSystem& sys, int n) {
  if (cfg.drives.size() != 2) throw InvalidParameters("phase scan needs two drives");
  if (n < 1) throw InvalidParameters("phase scan needs at least one point");
  PhaseScan s;
  for (int k = 0; k < n; ++k) {
    RamanConfig c = cfg;
    c.drives[1].phase = cfg.drives[0].phase + 2.0 * kPi * k / n;
    double r = effective_h_two_tone(c, sys).static_part.ratio();
    s.phase.push_back(2.0 * kPi * k / n);
    s.ratio.push_back(r);
    if (k == 0 || r > s.best_ratio) {
      s.best_ratio = r;
      s.best_phase = s.phase.back();
    }
  }
  return s;
}

namespace {

RamanMapPoint map_point(const CircuitParams& p, const BasisSpec& b, Mode mode, const RamanConfig& cfg,
                        const std::vector<double>& grid) {
  RamanMapPoint pt;
  pt.E_J = p.E_J;
  pt.E_C_theta = p.E_C_theta;
  pt.phi_ext = p.phi_ext;
  try {
    RamanSystem sys = raman_system(p, b, mode, cfg.M);
    RatioScan s = optimize_ratio(cfg, sys, grid, 1);
    pt.best_omega = s.best_omega;
    pt.best_ratio = s.best_ratio;
    pt.ok = true;
  } catch (const std::exception& e) {
    pt.error = e.what();
  }
  return pt;
}

}  // namespace

std::vector<RamanMapPoint> raman_parameter_map(const CircuitParams& base, const std::vector<double>& E_J,
                                               const std::vector<double>& E_C_theta, const BasisSpec& b,
                                               Mode mode, const RamanConfig& cfg,
                                               const std::vector<double>& omega_grid, int workers) {
  const std::size_t nc = E_C_theta.size();
  return parallel_map(E_J.size() * nc, workers, [&](std::size_t k) {
    CircuitParams p = base;
    p.E_J = E_J[k / nc];
    p.E_C_theta = E_C_theta[k % nc];
    p.sync_capacitances();
    return map_point(p, b, mode, cfg, omega_grid);
  });
}

std::vector<RamanMapPoint> raman_flux_scan(const CircuitParams& base, const std::vector<double>& phi_ext,
                                           const BasisSpec& b, Mode mode, const RamanConfig& cfg,
                                           const std::vector<double>& omega_grid, int workers) {
  return parallel_map(phi_ext.size(), workers, [&](std::size_t k) {
    CircuitParams p = base;
    p.phi_ext = phi_ext[k];
    return map_point(p, b, mode, cfg, omega_grid);
  });
}

}  // namespace zp
