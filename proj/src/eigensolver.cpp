#include "zeropi/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SparseCholesky>

#include "zeropi/operators.hpp"

namespace zp {

namespace {

VecC random_unit(Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  VecC v(n);
  for (Index i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v / v.norm();
}

struct Ritz {
  VecR theta;  // descending
  MatC vectors;
};

// Krylov-Schur with full reorthogonalisation for the largest eigenvalues of
// a Hermitian positive operator.  `converged` receives the current top-k
// Ritz pairs and returns true to stop.
Ritz krylov_schur(Index n, int k, Index m, const LinearOp& op, unsigned seed, int max_restarts,
                  const std::function<bool(const Ritz&)>& converged, int& iterations) {
  MatC V(n, m + 1);
  MatC hp = MatC::Zero(m, m);
  V.col(0) = random_unit(n, seed);
  Index j0 = 0;
  unsigned reseed = seed;
  VecC w(n);
  for (int restart = 0;; ++restart) {
    for (Index j = j0; j < m; ++j) {
      op(V.col(j), w);
      ++iterations;
      auto basis = V.leftCols(j + 1);
      VecC h = basis.adjoint() * w;
      w.noalias() -= basis * h;
      VecC h2 = basis.adjoint() * w;
      w.noalias() -= basis * h2;
      h += h2;
      hp.col(j).head(j + 1) = h;
      double beta = w.norm();
      double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
      if (beta < 1e-13 * scale) {
        // invariant subspace: continue with a fresh orthogonal direction
        w = random_unit(n, ++reseed);
        for (int pass = 0; pass < 2; ++pass) w.noalias() -= basis * (basis.adjoint() * w);
        w /= w.norm();
        if (j + 1 < m) {
          V.col(j + 1) = w;
        } else {
          V.col(m) = w;
        }
        continue;
      }
      V.col(j + 1) = w / beta;
    }
    MatC full = hp.selfadjointView<Eigen::Upper>();
    Eigen::SelfAdjointEigenSolver<MatC> es(full);
    // top-k (largest) Ritz pairs, descending
    Ritz r;
    r.theta.resize(k);
    MatC Y(m, k);
    for (int i = 0; i < k; ++i) {
      r.theta(i) = es.eigenvalues()(m - 1 - i);
      Y.col(i) = es.eigenvectors().col(m - 1 - i);
    }
    r.vectors = V.leftCols(m) * Y;
    if (converged(r) || restart >= max_restarts) {
      if (restart >= max_restarts && !converged(r))
        throw NumericalError("Krylov-Schur did not converge within the restart limit");
      return r;
    }
    Index p = k + (m - k) / 2;
    MatC keep(m, p);
    VecR tkeep(p);
    for (Index i = 0; i < p; ++i) {
      keep.col(i) = es.eigenvectors().col(m - 1 - i);
      tkeep(i) = es.eigenvalues()(m - 1 - i);
    }
    MatC newv = V.leftCols(m) * keep;
    V.leftCols(p) = newv;
    V.col(p) = V.col(m);
    hp.setZero();
    for (Index i = 0; i < p; ++i) hp(i, i) = tkeep(i);
    j0 = p;
  }
}

class SparseFactor : public ShiftedFactor {
 public:
  SparseFactor(const SpMatC& h, double sigma) {
    SpMatC id(h.rows(), h.cols());
    id.setIdentity();
    SpMatC a = h - sigma * id;
    ldlt_.compute(a);
    ok_ = ldlt_.info() == Eigen::Success;
    if (ok_) ok_ = (ldlt_.vectorD().real().array() > 0.0).all();
  }
  bool ok() const override { return ok_; }
  void solve(const VecC& in, VecC& out) const override { out = ldlt_.solve(in); }

 private:
  Eigen::SimplicialLDLT<SpMatC> ldlt_;
  bool ok_ = false;
};

class BlockFactor : public ShiftedFactor {
 public:
  BlockFactor(const ThetaPhiModel& m, double sigma) : n_(m.block_size()), b_(m.upper()) {
    const int d = m.blocks();
    llt_.reserve(d);
    MatC id = MatC::Identity(n_, n_);
    for (int k = 0; k < d; ++k) {
      MatC s = m.diagonal()[k];
      s.diagonal().array() -= sigma;
      if (k > 0) {
        MatC inv = llt_.back().solve(id);
        s -= b_[k - 1].conjugate().asDiagonal() * inv * b_[k - 1].asDiagonal();
      }
      llt_.emplace_back(s);
      if (llt_.back().info() != Eigen::Success) return;
    }
    ok_ = true;
  }
  bool ok() const override { return ok_; }
  void solve(const VecC& in, VecC& out) const override {
    const int d = static_cast<int>(llt_.size());
    out.resize(in.size());
    VecC z(in.size());
    z.head(n_) = in.head(n_);
    for (int k = 1; k < d; ++k) {
      VecC t = llt_[k - 1].solve(z.segment(static_cast<Index>(k - 1) * n_, n_));
      z.segment(static_cast<Index>(k) * n_, n_) =
          in.segment(static_cast<Index>(k) * n_, n_) - b_[k - 1].conjugate().cwiseProduct(t);
    }
    out.segment(static_cast<Index>(d - 1) * n_, n_) = llt_[d - 1].solve(z.segment(static_cast<Index>(d - 1) * n_, n_));
    for (int k = d - 2; k >= 0; --k) {
      VecC r = z.segment(static_cast<Index>(k) * n_, n_) -
               b_[k].cwiseProduct(out.segment(static_cast<Index>(k + 1) * n_, n_));
      out.segment(static_cast<Index>(k) * n_, n_) = llt_[k].solve(r);
    }
  }

 private:
  int n_;
  std::vector<VecC> b_;
  std::vector<Eigen::LLT<MatC>> llt_;
  bool ok_ = false;
};

double residual_of(const LinearOp& apply_h, const VecC& v, double lambda, VecC& scratch) {
  apply_h(v, scratch);
  return (scratch - lambda * v).norm();
}

}  // namespace

EigenPairs dense_lowest(const MatC& h, int k) {
  if (k > h.rows()) throw InvalidParameters("requested more eigenpairs than the dimension");
  MatC herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<MatC> es(herm);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  EigenPairs out;
  out.values = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  MatC r = herm * out.vectors - out.vectors * out.values.asDiagonal();
  out.max_residual = k > 0 ? r.colwise().norm().maxCoeff() : 0.0;
  return out;
}

EigenPairs shift_invert_lowest(Index n, int k, const LinearOp& apply_h, const FactorFactory& factor,
                               double lower_bound, const SolverOptions& opt) {
  if (k < 1 || k >= n) throw InvalidParameters("eigenpair count out of range");
  double sigma = lower_bound;
  std::unique_ptr<ShiftedFactor> f = factor(sigma);
  double step = std::max(1e-3, 0.1 * std::abs(sigma));
  for (int tries = 0; !f->ok(); ++tries) {
    if (tries > 80) throw NumericalError("could not find a shift below the spectrum");
    sigma -= step;
    step *= 2.0;
    f = factor(sigma);
  }
  int iterations = 0;

  // coarse pass to place the shift just below the lowest eigenvalue
  {
    Index mA = std::min<Index>(n - 1, std::max<Index>(40, k + 10));
    int kk = std::min<Index>(k, mA / 2);
    LinearOp op = [&](const VecC& a, VecC& b) { f->solve(a, b); };
    Ritz r = krylov_schur(n, kk, mA, op, opt.seed, 0, [](const Ritz&) { return true; }, iterations);
    double low = sigma + 1.0 / r.theta(0);
    double high = sigma + 1.0 / r.theta(kk - 1);
    double trial = low - std::max(0.1 * (high - low), 1e-6 * std::max(1.0, std::abs(low)));
    if (trial > sigma) {
      for (int tries = 0; tries < 8; ++tries) {
        auto g = factor(trial);
        if (g->ok()) {
          f = std::move(g);
          sigma = trial;
          break;
        }
        trial = 0.5 * (trial + sigma);
      }
    }
  }

  Index m = std::min<Index>(n - 1, std::max<Index>(2 * k + 30, 60));
  LinearOp op = [&](const VecC& a, VecC& b) { f->solve(a, b); };
  VecC scratch(n);
  double worst = 0.0;
  auto check = [&](const Ritz& r) {
    worst = 0.0;
    for (int i = 0; i < k; ++i) {
      VecC v = r.vectors.col(i);
      double lambda = sigma + 1.0 / r.theta(i);
      worst = std::max(worst, residual_of(apply_h, v, lambda, scratch));
      if (worst > opt.residual_tol) return false;
    }
    return true;
  };
  Ritz r = krylov_schur(n, k, m, op, opt.seed + 1, opt.max_restarts, check, iterations);

  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    out.values(i) = sigma + 1.0 / r.theta(i);
    out.vectors.col(i) = r.vectors.col(i).normalized();
  }
  // theta descending -> lambda ascending already; enforce
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return out.values(a) < out.values(b); });
  EigenPairs sorted;
  sorted.values.resize(k);
  sorted.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    sorted.values(i) = out.values(idx[i]);
    sorted.vectors.col(i) = out.vectors.col(idx[i]);
  }
  sorted.max_residual = worst;
  sorted.iterations = iterations;
  return sorted;
}

std::unique_ptr<ShiftedFactor> block_tridiagonal_factor(const ThetaPhiModel& m, double sigma) {
  return std::make_unique<BlockFactor>(m, sigma);
}

std::unique_ptr<ShiftedFactor> sparse_factor(const SpMatC& h, double sigma) {
  return std::make_unique<SparseFactor>(h, sigma);
}

double gershgorin_lower(const SpMatC& h) {
  VecR diag = VecR::Zero(h.rows());
  VecR radius = VecR::Zero(h.rows());
  for (int c = 0; c < h.outerSize(); ++c)
    for (SpMatC::InnerIterator it(h, c); it; ++it) {
      if (it.row() == it.col())
        diag(it.row()) += it.value().real();
      else
        radius(it.row()) += std::abs(it.value());
    }
  return (diag - radius).minCoeff();
}

EigenPairs lowest_eigenpairs(const SpMatC& h, int k, const SolverOptions& opt) {
  if (h.rows() <= opt.dense_threshold) return dense_lowest(MatC(h), k);
  LinearOp apply = [&h](const VecC& a, VecC& b) { b = h * a; };
  FactorFactory fac = [&h](double s) { return sparse_factor(h, s); };
  return shift_invert_lowest(h.rows(), k, apply, fac, gershgorin_lower(h) - 1e-6, opt);
}

EigenPairs lowest_eigenpairs(const ThetaPhiModel& m, int k, const SolverOptions& opt) {
  if (m.dim() <= opt.dense_threshold) return dense_lowest(MatC(m.to_sparse()), k);
  LinearOp apply = [&m](const VecC& a, VecC& b) { m.apply(a, b); };
  FactorFactory fac = [&m](double s) { return block_tridiagonal_factor(m, s); };
  return shift_invert_lowest(m.dim(), k, apply, fac, m.lower_bound() - 1e-6, opt);
}

}  // namespace zp
