#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "zeropi/types.hpp"

namespace zp {

enum class PulseShape { square, tanh };

// Drive envelope in units of e*V (hbar*omega_p).  H(t) = H0 + value(t) * D
// where D is the coefficient operator of e*V.
struct PulseSpec {
  double amplitude = 0.0;
  double t_start = 0.0;
  double t_gate = 1.0;
  PulseShape shape = PulseShape::square;
  double sigma = 0.0;
  double carrier_omega = 0.0;  // 0: no carrier
  double phase = 0.0;
  bool area_matched = true;

  void validate() const;
  double envelope(double t) const;
  double value(double t) const;
  bool piecewise_constant() const;
  double t_begin() const;  // support of the envelope
  double t_end() const;
  // flat width and amplitude of the area-matched tanh pulse
  std::pair<double, double> tanh_width_amplitude() const;
};

using Envelope = std::function<double(double)>;

struct DriveTerm {
  Envelope f;
  MatC op;
};

struct PropagationOptions {
  double tol = 1e-10;          // max-norm change of U under dt -> dt/2
  double min_dt = 1e-7;
  int steps_per_period = 40;
  double max_phase_step = 0.1;  // dt * ||H|| bound
};

struct Propagation {
  MatC U;
  double dt = 0.0;
  int steps = 0;
  double unitarity_defect = 0.0;
};

double unitarity_defect(const MatC& U);

// exp(-i H t) for Hermitian H
MatC expm_hermitian(const MatC& H, double t);

// U(t1, t0) for H0 + sum_k f_k(t) A_k using RK4 with step halving.
Propagation propagate_unitary(const MatC& H0, const std::vector<DriveTerm>& terms, double t0,
                              double t1, const PropagationOptions& opt = {});

// Exact stepping for piecewise-constant envelopes sampled at the midpoints
// of a uniform grid of step dt starting at t0.
Propagation propagate_piecewise(const MatC& H0, const MatC& D, const std::vector<double>& values,
                                double dt);

// U(t_begin, t_end) of a pulse; square pulses without carrier use one exact
// exponential, everything else RK4.
Propagation propagate_unitary(const MatC& H0, const MatC& D, const PulseSpec& pulse,
                              const PropagationOptions& opt = {});

// state at `samples` uniformly spaced times across the pulse (inclusive)
std::vector<VecC> propagate_states(const MatC& H0, const MatC& D, const PulseSpec& pulse,
                                   const VecC& psi0, int samples, std::vector<double>* times = nullptr,
                                   const PropagationOptions& opt = {});

struct ThermalRates {
  double kappa = 0.0;
  double n_th = 0.0;
};

// omega in angular units of omega_p; temperature in kelvin
ThermalRates thermal_rates(double omega, double temperature, double Q,
                           double omega_p_over_2pi = 4.0e10);

struct CollapseOp {
  MatC op;
  double rate = 0.0;
  std::string name;
};

struct LindbladSpec {
  MatC hamiltonian;
  std::vector<DriveTerm> drive;
  std::vector<CollapseOp> collapse;

  Index dim() const { return hamiltonian.rows(); }
  void validate() const;
};

// D[x] rho = x rho x^dag - (x^dag x rho + rho x^dag x)/2
MatC dissipator(const MatC& x, const MatC& rho);
MatC lindblad_rhs(const LindbladSpec& spec, double t, const MatC& rho);

// Column-stacked Liouvillian of the static part.
MatC liouvillian(const LindbladSpec& spec);

// Same integration on the column-stacked vector with sparse superoperators;
// suited to larger sparse models.
MatC lindblad_evolve_sparse(const LindbladSpec& spec, const MatC& rho0, double t0, double t1, double dt,
                            const std::function<void(double, const MatC&)>& observe = {},
                            int observe_every = 1);

struct LindbladOptions {
  double dt = 0.01;
  double trace_tol = 1e-8;
  double positivity_abort = -1e-6;
  bool monitor_positivity = true;
  Index dimension_limit = 400;  // Hilbert dimension of the matrix-free integrator
};

struct LindbladTrajectory {
  std::vector<double> t;
  std::vector<MatC> rho;
  double max_trace_error = 0.0;
  double min_eigenvalue = 0.0;
};

// RK4 integration; rho is stored at every entry of t_grid (ascending, first
// entry is the initial time).
LindbladTrajectory lindblad_propagate(const LindbladSpec& spec, const MatC& rho0,
                                      const std::vector<double>& t_grid,
                                      const LindbladOptions& opt = {});

// Final state only; `observe` is called after every step when provided.
MatC lindblad_evolve(const LindbladSpec& spec, const MatC& rho0, double t0, double t1, double dt,
                     const std::function<void(double, const MatC&)>& observe = {});

struct SteadyState {
  MatC rho;
  double residual = 0.0;
};

// Dense null-space solve; the superoperator side n^2 must not exceed the limit.
SteadyState steady_state(const LindbladSpec& spec, Index dimension_limit = 3600);

}  // namespace zp
