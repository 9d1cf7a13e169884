#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace zp {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;
using SpMatC = Eigen::SparseMatrix<cplx>;
using Index = Eigen::Index;
using Mat2c = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

struct InvalidParameters : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solver or integrator could not reach the requested accuracy.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionLimit : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace zp
