#include "zeropi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "zeropi/effective1d.hpp"
#include "zeropi/parallel.hpp"

namespace zp {

namespace {

constexpr double kDegenerate = 1e-10;

// largest component real and positive
void fix_gauge(MatC& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    Index imax;
    v.col(j).cwiseAbs().maxCoeff(&imax);
    cplx c = v(imax, j);
    if (std::abs(c) > 0.0) v.col(j) *= std::conj(c) / std::abs(c);
  }
}

// Rotate numerically degenerate pairs onto eigenvectors of the well operator.
void break_ties(VecR& e, MatC& v, const LinearOp* well) {
  if (well == nullptr) return;
  VecC tmp(v.rows());
  for (Index i = 0; i + 1 < e.size(); ++i) {
    if (std::abs(e(i + 1) - e(i)) >= kDegenerate) continue;
    MatC pair = v.middleCols(i, 2);
    MatC w(2, 2);
    for (int a = 0; a < 2; ++a) {
      (*well)(pair.col(a), tmp);
      for (int c = 0; c < 2; ++c) w(c, a) = pair.col(c).dot(tmp);
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (w + w.adjoint()));
    // larger well expectation first
    MatC rot(2, 2);
    rot.col(0) = es.eigenvectors().col(1);
    rot.col(1) = es.eigenvectors().col(0);
    v.middleCols(i, 2) = pair * rot;
    ++i;
  }
}

Spectrum finish(EigenPairs ep, const LinearOp* well) {
  Spectrum s;
  s.eigenvalues = std::move(ep.values);
  s.eigenvectors = std::move(ep.vectors);
  s.max_residual = ep.max_residual;
  fix_gauge(s.eigenvectors);
  break_ties(s.eigenvalues, s.eigenvectors, well);
  fix_gauge(s.eigenvectors);
  s.doublets = find_doublets(s.eigenvalues);
  return s;
}

// cos(theta) on the theta factor of a tensor basis, identity elsewhere
SpMatC cos_theta_on(const BasisLabels& labels) {
  Index before = 1, after = 1;
  int nth = -1;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].first == "theta") {
      nth = labels[i].second;
      continue;
    }
    (nth < 0 ? before : after) *= labels[i].second;
  }
  if (nth < 0) return SpMatC();
  Index dim = before * nth * after;
  std::vector<Eigen::Triplet<cplx>> t;
  for (Index b = 0; b < before; ++b)
    for (int k = 0; k + 1 < nth; ++k)
      for (Index a = 0; a < after; ++a) {
        Index r = (b * nth + k) * after + a;
        Index c = r + after;
        t.emplace_back(r, c, 0.5);
        t.emplace_back(c, r, 0.5);
      }
  SpMatC m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

std::vector<Doublet> find_doublets(const VecR& e, double ratio) {
  std::vector<Doublet> out;
  const Index n = e.size();
  for (Index i = 0; i + 1 < n;) {
    double gap = e(i + 1) - e(i);
    double left = i > 0 ? e(i) - e(i - 1) : std::numeric_limits<double>::infinity();
    double right = i + 2 < n ? e(i + 2) - e(i + 1) : std::numeric_limits<double>::infinity();
    double adj = std::min(left, right);
    if (std::isfinite(adj) && gap < ratio * adj) {
      out.push_back({static_cast<int>(i), static_cast<int>(i + 1), gap});
      i += 2;
    } else {
      ++i;
    }
  }
  return out;
}

Spectrum diagonalize(const OperatorMatrix& h, int k, const SolverOptions& opt) {
  if (!h.hermitian) throw InvalidParameters("diagonalize requires a hermitian operator");
  if (h.hermiticity_defect() >= 1e-12) throw InvalidParameters("operator is not hermitian");
  if (k < 1 || k > h.dim()) throw InvalidParameters("eigenpair count out of range");
  EigenPairs ep = lowest_eigenpairs(h.data, k, opt);
  SpMatC cw = cos_theta_on(h.basis);
  LinearOp well = [&cw](const VecC& a, VecC& b) { b = cw * a; };
  Spectrum s = finish(std::move(ep), cw.rows() == h.dim() ? &well : nullptr);
  s.labels = h.basis;
  return s;
}

Spectrum diagonalize(const ThetaPhiModel& m, int k, const SolverOptions& opt) {
  if (k < 1 || k > m.dim()) throw InvalidParameters("eigenpair count out of range");
  EigenPairs ep = lowest_eigenpairs(m, k, opt);
  LinearOp well = [&m](const VecC& a, VecC& b) { m.apply_cos_theta(a, b); };
  Spectrum s = finish(std::move(ep), &well);
  s.basis_used = m.basis();
  s.labels = {{"theta", m.blocks()}, {"phi", m.block_size()}};
  return s;
}

Spectrum spectrum_2d(const CircuitParams& p, const BasisSpec& b, int k, const SolverOptions& opt) {
  ThetaPhiModel m(p, b);
  return diagonalize(m, k, opt);
}

cplx matrix_element(const OperatorMatrix& op, const Spectrum& s, int i, int j) {
  if (i < 0 || j < 0 || i >= s.size() || j >= s.size())
    throw InvalidParameters("matrix element index out of range");
  if (op.dim() != s.eigenvectors.rows()) throw InvalidParameters("operator and spectrum bases differ");
  VecC t = op.data * s.eigenvectors.col(j);
  return s.eigenvectors.col(i).dot(t);
}

MatC matrix_table(const SpMatC& op, const Spectrum& s, int M) {
  if (M > s.size()) throw InvalidParameters("table size exceeds available levels");
  auto v = s.eigenvectors.leftCols(M);
  MatC t = op * v;
  return v.adjoint() * t;
}

MatC matrix_table(const LinearOp& op, const Spectrum& s, int M) {
  if (M > s.size()) throw InvalidParameters("table size exceeds available levels");
  MatC applied(s.eigenvectors.rows(), M);
  VecC tmp;
  for (int j = 0; j < M; ++j) {
    op(s.eigenvectors.col(j), tmp);
    applied.col(j) = tmp;
  }
  return s.eigenvectors.leftCols(M).adjoint() * applied;
}

MatC n_theta_table(const ThetaPhiModel& m, const Spectrum& s, int M) {
  return matrix_table([&m](const VecC& a, VecC& b) { m.apply_n_theta(a, b); }, s, M);
}

MatC n_phi_table(const ThetaPhiModel& m, const Spectrum& s, int M) {
  return matrix_table([&m](const VecC& a, VecC& b) { m.apply_n_phi(a, b); }, s, M);
}

MatC phi_table(const ThetaPhiModel& m, const Spectrum& s, int M) {
  const VecR& x = m.phi().nodes();
  const int n = m.block_size();
  LinearOp op = [&](const VecC& a, VecC& b) {
    b.resize(a.size());
    for (int k = 0; k < m.blocks(); ++k)
      b.segment(static_cast<Index>(k) * n, n) =
          x.cast<cplx>().cwiseProduct(a.segment(static_cast<Index>(k) * n, n));
  };
  return matrix_table(op, s, M);
}

ConvergenceReport converge_basis(const CircuitParams& p, const BasisSpec& start, double tol,
                                 int levels, Index max_dim) {
  start.validate();
  ConvergenceReport rep;
  rep.basis = start;
  if (std::isinf(tol)) return rep;
  if (!(tol > 0.0)) throw InvalidParameters("convergence tolerance must be positive");

  std::map<std::pair<int, int>, VecR> cache;
  auto eval = [&](int nc, int nf) -> const VecR& {
    auto key = std::make_pair(nc, nf);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    BasisSpec b = start;
    b.n_charge_max = nc;
    b.n_fock_phi = nf;
    Index dim = static_cast<Index>(b.charge_dim()) * nf;
    if (dim > max_dim)
      throw DimensionLimit("basis convergence exceeded dimension " + std::to_string(max_dim));
    ThetaPhiModel m(p, b);
    int k = static_cast<int>(std::min<Index>(levels, m.dim()));
    ++rep.evaluations;
    return cache.emplace(key, lowest_eigenpairs(m, k).values).first->second;
  };
  auto stable = [&](const VecR& a, const VecR& ref) {
    double spread = ref(ref.size() - 1) - ref(0);
    for (Index i = 0; i < ref.size(); ++i) {
      double scale = std::max(std::abs(ref(i)), spread);
      if (std::abs(a(i) - ref(i)) > tol * scale) return false;
    }
    return true;
  };

  int nc = start.n_charge_max, nf = start.n_fock_phi;
  while (!stable(eval(nc, nf), eval(2 * nc, 2 * nf))) {
    nc *= 2;
    nf *= 2;
  }
  const VecR ref = eval(2 * nc, 2 * nf);
  // bisect each cutoff against the largest evaluated basis
  auto bisect = [&](int lo, int hi, auto make) {
    if (stable(eval(make(lo).first, make(lo).second), ref)) return lo;
    while (hi - lo > 1) {
      int mid = lo + (hi - lo) / 2;
      auto [c, f] = make(mid);
      if (stable(eval(c, f), ref))
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  };
  nc = bisect(std::max(1, start.n_charge_max / 2), nc, [&](int x) { return std::make_pair(x, nf); });
  nf = bisect(std::max(1, start.n_fock_phi / 2), nf, [&](int x) { return std::make_pair(nc, x); });
  nc = std::max(nc, start.n_charge_max);
  nf = std::max(nf, start.n_fock_phi);
  rep.basis.n_charge_max = nc;
  rep.basis.n_fock_phi = nf;
  rep.levels = eval(nc, nf);
  return rep;
}

double symmetry_residual(const CircuitParams& p, const BasisSpec& b) {
  BoCurve curve = bo_ground_energy(p, theta_grid(81), p.phi_ext, b.n_fock_phi);
  OperatorMatrix h = build_1d_hamiltonian(curve, p, b.n_charge_max);
  MatC hd(h.data);
  const Index n = hd.rows();
  double diff = 0.0, off = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      // U = exp(-i pi n) is diagonal with entries (-1)^n
      double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      diff = std::max(diff, std::abs(sign * hd(i, j) - hd(i, j)));
      off = std::max(off, std::abs(hd(i, j)));
    }
  return off > 0.0 ? diff / off : 0.0;
}

namespace {

double* param_slot(CircuitParams& p, const std::string& name, bool& energy) {
  energy = false;
  if (name == "E_J") return &p.E_J;
  if (name == "E_L") return &p.E_L;
  if (name == "E_C_theta") return energy = true, &p.E_C_theta;
  if (name == "E_C_phi") return energy = true, &p.E_C_phi;
  if (name == "C_g") return energy = true, &p.C_g;
  if (name == "C_0") return energy = true, &p.C_0;
  if (name == "omega_p_over_2pi") return &p.omega_p_over_2pi;
  if (name == "dE_J") return &p.dE_J;
  if (name == "dE_L") return &p.dE_L;
  if (name == "dC") return &p.dC;
  if (name == "dC_J") return &p.dC_J;
  if (name == "phi_ext") return &p.phi_ext;
  if (name == "n_g_theta") return &p.n_g_theta;
  const std::string g = "dC_g", z = "dC_0";
  for (int i = 0; i < 4; ++i) {
    if (name == g + std::to_string(i + 1)) return &p.dC_g[i];
    if (name == z + std::to_string(i + 1)) return &p.dC_0[i];
  }
  throw InvalidParameters("unknown parameter name '" + name + "'");
}

}  // namespace

void set_named_param(CircuitParams& p, const std::string& name, double value) {
  bool energy;
  *param_slot(p, name, energy) = value;
  if (energy) p.sync_capacitances();
}

double get_named_param(const CircuitParams& p, const std::string& name) {
  CircuitParams copy = p;
  bool energy;
  return *param_slot(copy, name, energy);
}

std::vector<SweepPoint> sweep(const CircuitParams& p, const std::string& axis,
                              const std::vector<double>& grid, const BasisSpec& b, int k,
                              int workers) {
  if (grid.empty()) throw InvalidParameters("sweep grid is empty");
  get_named_param(p, axis);
  return parallel_map(grid.size(), workers, [&](std::size_t i) {
    SweepPoint pt;
    pt.value = grid[i];
    try {
      CircuitParams q = p;
      set_named_param(q, axis, grid[i]);
      ThetaPhiModel m(q, b);
      Spectrum s = diagonalize(m, k);
      pt.ground = s.eigenvalues(0);
      pt.levels = s.eigenvalues.array() - s.eigenvalues(0);
      for (const auto& d : s.doublets) pt.splittings.push_back(d.splitting);
      if (k >= 2) pt.n_theta_01 = std::abs(n_theta_table(m, s, 2)(0, 1));
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    return pt;
  });
}

}  // namespace zp
