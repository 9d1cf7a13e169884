#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "zeropi/types.hpp"

namespace zp {

class ThetaPhiModel;

using LinearOp = std::function<void(const VecC& in, VecC& out)>;

struct EigenPairs {
  VecR values;   // ascending
  MatC vectors;  // columns
  double max_residual = 0.0;
  int iterations = 0;
};

struct SolverOptions {
  double residual_tol = 1e-9;
  Index dense_threshold = 1500;
  int max_restarts = 400;
  unsigned seed = 12345;
};

// Solves (H - sigma) x = y.  Construction fails with std::nullopt-like
// semantics (ok() == false) when H - sigma is not positive definite.
class ShiftedFactor {
 public:
  virtual ~ShiftedFactor() = default;
  virtual bool ok() const = 0;
  virtual void solve(const VecC& in, VecC& out) const = 0;
};

using FactorFactory = std::function<std::unique_ptr<ShiftedFactor>(double sigma)>;

EigenPairs dense_lowest(const MatC& h, int k);

// k lowest eigenpairs of a Hermitian operator using Krylov-Schur iteration
// on (H - sigma)^{-1}.  sigma starts at `lower_bound` (must be below the
// spectrum or is lowered until the factorization is positive definite).
EigenPairs shift_invert_lowest(Index n, int k, const LinearOp& apply_h, const FactorFactory& factor,
                               double lower_bound, const SolverOptions& opt = {});

std::unique_ptr<ShiftedFactor> block_tridiagonal_factor(const ThetaPhiModel& m, double sigma);
std::unique_ptr<ShiftedFactor> sparse_factor(const SpMatC& h, double sigma);

EigenPairs lowest_eigenpairs(const SpMatC& h, int k, const SolverOptions& opt = {});
EigenPairs lowest_eigenpairs(const ThetaPhiModel& m, int k, const SolverOptions& opt = {});

// Gershgorin lower bound of a Hermitian sparse matrix.
double gershgorin_lower(const SpMatC& h);

}  // namespace zp
