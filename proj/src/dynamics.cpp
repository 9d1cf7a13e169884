#include "zeropi/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "zeropi/units.hpp"

namespace zp {

void PulseSpec::validate() const {
  if (!(t_gate > 0.0)) throw InvalidParameters("pulse t_gate must be positive");
  if (!(sigma >= 0.0)) throw InvalidParameters("pulse sigma must be non-negative");
  if (shape == PulseShape::tanh && sigma > 0.5 * t_gate)
    throw InvalidParameters("tanh pulse requires sigma <= t_gate/2");
  if (shape == PulseShape::tanh && area_matched && sigma > 0.0 && sigma >= 0.5 * t_gate)
    throw InvalidParameters("area matching needs sigma < t_gate/2");
}

std::pair<double, double> PulseSpec::tanh_width_amplitude() const {
  if (shape != PulseShape::tanh || sigma == 0.0) return {t_gate, amplitude};
  if (!area_matched) return {t_gate, amplitude};
  // w / tanh(w / 2 sigma) = t_gate keeps both the peak and the area
  auto g = [&](double w) { return w / std::tanh(0.5 * w / sigma); };
  double lo = 0.0, hi = t_gate;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * t_gate; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid > 0.0 && g(mid) > t_gate)
      hi = mid;
    else
      lo = mid;
  }
  double w = 0.5 * (lo + hi);
  return {w, amplitude * t_gate / w};
}

double PulseSpec::t_begin() const {
  if (shape != PulseShape::tanh || sigma == 0.0) return t_start;
  double w = tanh_width_amplitude().first;
  double half = std::max(0.5 * t_gate, 0.5 * w + 8.0 * sigma);
  return t_start + 0.5 * t_gate - half;
}

double PulseSpec::t_end() const { return 2.0 * t_start + t_gate - t_begin(); }

double PulseSpec::envelope(double t) const {
  if (t < t_begin() || t > t_end()) return 0.0;
  if (shape == PulseShape::square || sigma == 0.0) return amplitude;
  auto [w, a] = tanh_width_amplitude();
  double c = t_start + 0.5 * t_gate;
  return 0.5 * a * (std::tanh((t - c + 0.5 * w) / sigma) - std::tanh((t - c - 0.5 * w) / sigma));
}

double PulseSpec::value(double t) const {
  double e = envelope(t);
  if (carrier_omega == 0.0) return e;
  return e * std::cos(carrier_omega * t + phase);
}

bool PulseSpec::piecewise_constant() const {
  return (shape == PulseShape::square || sigma == 0.0) && carrier_omega == 0.0;
}

double unitarity_defect(const MatC& U) {
  MatC d = U.adjoint() * U - MatC::Identity(U.cols(), U.cols());
  return d.cwiseAbs().maxCoeff();
}

MatC expm_hermitian(const MatC& H, double t) {
  Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (H + H.adjoint()));
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed in expm");
  VecC ph = (es.eigenvalues().array() * (-t)).unaryExpr([](double x) { return std::polar(1.0, x); });
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

double spectral_radius(const MatC& a) {
  Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

MatC hamiltonian_at(const MatC& H0, const std::vector<DriveTerm>& terms, double t) {
  MatC h = H0;
  for (const auto& d : terms) {
    double f = d.f(t);
    if (f != 0.0) h += f * d.op;
  }
  return h;
}

template <class M>
M rk4_step(const MatC& H0, const std::vector<DriveTerm>& terms, double t, double h, const M& y) {
  auto f = [&](double s, const M& x) -> M { return -kI * (hamiltonian_at(H0, terms, s) * x); };
  M k1 = f(t, y);
  M k2 = f(t + 0.5 * h, y + (0.5 * h) * k1);
  M k3 = f(t + 0.5 * h, y + (0.5 * h) * k2);
  M k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

MatC rk4_unitary(const MatC& H0, const std::vector<DriveTerm>& terms, double t0, double t1, long n) {
  MatC U = MatC::Identity(H0.rows(), H0.cols());
  double h = (t1 - t0) / static_cast<double>(n);
  for (long k = 0; k < n; ++k) U = rk4_step(H0, terms, t0 + k * h, h, U);
  return U;
}

// initial step count from the phase-per-step and samples-per-period bounds
long initial_steps(const MatC& H0, const std::vector<DriveTerm>& terms, double t0, double t1,
                   const PropagationOptions& opt) {
  Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (H0 + H0.adjoint()), Eigen::EigenvaluesOnly);
  double spread = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
  double hmax = es.eigenvalues().cwiseAbs().maxCoeff();
  for (const auto& d : terms) {
    double fmax = 0.0;
    for (int i = 0; i <= 200; ++i) fmax = std::max(fmax, std::abs(d.f(t0 + (t1 - t0) * i / 200.0)));
    hmax += fmax * spectral_radius(d.op);
  }
  double dt = hmax > 0.0 ? opt.max_phase_step / hmax : (t1 - t0);
  if (spread > 0.0) dt = std::min(dt, 2.0 * kPi / spread / opt.steps_per_period);
  return std::max<long>(1, static_cast<long>(std::ceil((t1 - t0) / dt)));
}

}  // namespace

Propagation propagate_unitary(const MatC& H0, const std::vector<DriveTerm>& terms, double t0,
                              double t1, const PropagationOptions& opt) {
  if (!(t1 >= t0)) throw InvalidParameters("propagation interval must be ascending");
  for (const auto& d : terms)
    if (d.op.rows() != H0.rows() || d.op.cols() != H0.cols())
      throw InvalidParameters("drive operator dimension mismatch");
  Propagation out;
  if (t1 == t0) {
    out.U = MatC::Identity(H0.rows(), H0.cols());
    return out;
  }
  // remove the mean energy to keep the RK4 phases small
  double shift = H0.diagonal().real().mean();
  MatC Hs = H0 - shift * MatC::Identity(H0.rows(), H0.cols());
  long n = initial_steps(Hs, terms, t0, t1, opt);
  MatC prev = rk4_unitary(Hs, terms, t0, t1, n);
  for (;;) {
    double dt = (t1 - t0) / static_cast<double>(2 * n);
    if (dt < opt.min_dt) throw NumericalError("propagation step-size floor reached without meeting tolerance");
    MatC next = rk4_unitary(Hs, terms, t0, t1, 2 * n);
    double change = (next - prev).cwiseAbs().maxCoeff();
    n *= 2;
    prev = std::move(next);
    if (change < opt.tol) {
      out.dt = dt;
      break;
    }
  }
  out.steps = static_cast<int>(n);
  out.U = std::polar(1.0, -shift * (t1 - t0)) * prev;
  out.unitarity_defect = unitarity_defect(out.U);
  return out;
}

Propagation propagate_piecewise(const MatC& H0, const MatC& D, const std::vector<double>& values,
                                double dt) {
  Propagation out;
  out.U = MatC::Identity(H0.rows(), H0.cols());
  out.dt = dt;
  double last = std::numeric_limits<double>::quiet_NaN();
  MatC step;
  for (double v : values) {
    if (v != last) {
      step = expm_hermitian(H0 + v * D, dt);
      last = v;
    }
    out.U = step * out.U;
  }
  out.steps = static_cast<int>(values.size());
  out.unitarity_defect = unitarity_defect(out.U);
  return out;
}

Propagation propagate_unitary(const MatC& H0, const MatC& D, const PulseSpec& pulse,
                              const PropagationOptions& opt) {
  pulse.validate();
  if (pulse.piecewise_constant()) {
    Propagation out;
    out.U = expm_hermitian(H0 + pulse.amplitude * D, pulse.t_gate);
    out.dt = pulse.t_gate;
    out.steps = 1;
    out.unitarity_defect = unitarity_defect(out.U);
    return out;
  }
  std::vector<DriveTerm> terms{{[&pulse](double t) { return pulse.value(t); }, D}};
  double tb = pulse.t_begin(), te = pulse.t_end();
  Propagation out = propagate_unitary(H0, terms, tb, te, opt);
  // refer the propagator to the square-pulse window [t_start, t_start + t_gate]
  double before = pulse.t_start - tb;
  double after = te - (pulse.t_start + pulse.t_gate);
  if (before != 0.0 || after != 0.0) {
    out.U = expm_hermitian(H0, -after) * out.U * expm_hermitian(H0, -before);
    out.unitarity_defect = unitarity_defect(out.U);
  }
  return out;
}

std::vector<VecC> propagate_states(const MatC& H0, const MatC& D, const PulseSpec& pulse,
                                   const VecC& psi0, int samples, std::vector<double>* times,
                                   const PropagationOptions& opt) {
  pulse.validate();
  if (samples < 2) throw InvalidParameters("need at least two samples");
  const double tb = pulse.t_begin(), te = pulse.t_end();
  std::vector<VecC> out;
  if (times) times->clear();
  auto record = [&](double t, const VecC& v) {
    out.push_back(v);
    if (times) times->push_back(t);
  };
  if (pulse.piecewise_constant()) {
    Eigen::SelfAdjointEigenSolver<MatC> es(H0 + pulse.amplitude * D);
    VecC c = es.eigenvectors().adjoint() * psi0;
    for (int i = 0; i < samples; ++i) {
      double t = pulse.t_gate * i / (samples - 1);
      VecC ph = (es.eigenvalues().array() * (-t)).unaryExpr([](double x) { return std::polar(1.0, x); });
      record(pulse.t_start + t, es.eigenvectors() * ph.cwiseProduct(c));
    }
    return out;
  }
  std::vector<DriveTerm> terms{{[&pulse](double t) { return pulse.value(t); }, D}};
  Propagation ref = propagate_unitary(H0, terms, tb, te, opt);
  double shift = H0.diagonal().real().mean();
  MatC Hs = H0 - shift * MatC::Identity(H0.rows(), H0.cols());
  double interval = (te - tb) / (samples - 1);
  long per = std::max<long>(1, static_cast<long>(std::ceil(interval / ref.dt)));
  double h = interval / per;
  VecC psi = psi0;
  record(tb, psi);
  for (int s = 1; s < samples; ++s) {
    double t0 = tb + (s - 1) * interval;
    for (long k = 0; k < per; ++k) psi = rk4_step(Hs, terms, t0 + k * h, h, psi);
    record(tb + s * interval, std::polar(1.0, -shift * s * interval) * psi);
  }
  return out;
}

ThermalRates thermal_rates(double omega, double temperature, double Q, double omega_p_over_2pi) {
  if (!(omega > 0.0)) throw InvalidParameters("thermal_rates: omega must be positive");
  if (!(temperature >= 0.0)) throw InvalidParameters("thermal_rates: temperature must be >= 0");
  if (!(Q > 0.0)) throw InvalidParameters("thermal_rates: Q must be positive");
  ThermalRates r;
  r.kappa = omega / Q;
  if (temperature > 0.0) {
    units::Scale sc{omega_p_over_2pi};
    r.n_th = units::bose_einstein(sc.energy_over_kT(omega, temperature));
  }
  return r;
}

void LindbladSpec::validate() const {
  const Index n = hamiltonian.rows();
  if (hamiltonian.cols() != n) throw InvalidParameters("Hamiltonian must be square");
  for (const auto& d : drive)
    if (d.op.rows() != n || d.op.cols() != n) throw InvalidParameters("drive operator dimension mismatch");
  for (const auto& c : collapse) {
    if (c.op.rows() != n || c.op.cols() != n)
      throw InvalidParameters("collapse operator '" + c.name + "' dimension mismatch");
    if (!(c.rate >= 0.0)) throw InvalidParameters("collapse rate must be non-negative");
  }
}

MatC dissipator(const MatC& x, const MatC& rho) {
  MatC xdx = x.adjoint() * x;
  return x * rho * x.adjoint() - 0.5 * (xdx * rho + rho * xdx);
}

MatC lindblad_rhs(const LindbladSpec& spec, double t, const MatC& rho) {
  MatC h = hamiltonian_at(spec.hamiltonian, spec.drive, t);
  MatC out = -kI * (h * rho - rho * h);
  for (const auto& c : spec.collapse)
    if (c.rate != 0.0) out += c.rate * dissipator(c.op, rho);
  return out;
}

MatC liouvillian(const LindbladSpec& spec) {
  spec.validate();
  const Index n = spec.dim();
  MatC I = MatC::Identity(n, n);
  auto kron = [](const MatC& a, const MatC& b) {
    MatC k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
  };
  const MatC& H = spec.hamiltonian;
  // vec(A rho B) = (B^T kron A) vec(rho)
  MatC L = -kI * (kron(I, H) - kron(H.transpose(), I));
  for (const auto& c : spec.collapse) {
    if (c.rate == 0.0) continue;
    MatC xdx = c.op.adjoint() * c.op;
    L += c.rate * (kron(c.op.conjugate(), c.op) - 0.5 * kron(I, xdx) - 0.5 * kron(xdx.transpose(), I));
  }
  return L;
}

namespace {

struct Generator {
  MatC heff;  // H - i/2 sum r x^dag x
  std::vector<std::pair<double, MatC>> jumps;
  const LindbladSpec* spec;

  explicit Generator(const LindbladSpec& s) : spec(&s) {
    heff = s.hamiltonian;
    for (const auto& c : s.collapse) {
      if (c.rate == 0.0) continue;
      heff -= (0.5 * c.rate) * kI * (c.op.adjoint() * c.op);
      jumps.emplace_back(c.rate, c.op);
    }
  }

  MatC operator()(double t, const MatC& rho) const {
    MatC h = heff;
    for (const auto& d : spec->drive) {
      double f = d.f(t);
      if (f != 0.0) h += f * d.op;
    }
    MatC hr = h * rho;
    MatC out = -kI * hr + kI * hr.adjoint();  // rho Hermitian
    for (const auto& [r, x] : jumps) out += r * (x * rho * x.adjoint());
    return out;
  }
};

MatC rk4_rho(const Generator& g, double t, double h, const MatC& rho) {
  MatC k1 = g(t, rho);
  MatC k2 = g(t + 0.5 * h, rho + (0.5 * h) * k1);
  MatC k3 = g(t + 0.5 * h, rho + (0.5 * h) * k2);
  MatC k4 = g(t + h, rho + h * k3);
  MatC next = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return 0.5 * (next + next.adjoint());
}

// `Generator` assumes a Hermitian argument; for general operators (e.g.
// process-tomography inputs |i><j|) integrate the full commutator form.
bool is_hermitian(const MatC& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-14; }

MatC rk4_general(const LindbladSpec& s, double t, double h, const MatC& rho) {
  MatC k1 = lindblad_rhs(s, t, rho);
  MatC k2 = lindblad_rhs(s, t + 0.5 * h, rho + (0.5 * h) * k1);
  MatC k3 = lindblad_rhs(s, t + 0.5 * h, rho + (0.5 * h) * k2);
  MatC k4 = lindblad_rhs(s, t + h, rho + h * k3);
  return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

MatC lindblad_evolve(const LindbladSpec& spec, const MatC& rho0, double t0, double t1, double dt,
                     const std::function<void(double, const MatC&)>& observe) {
  spec.validate();
  if (rho0.rows() != spec.dim() || rho0.cols() != spec.dim())
    throw InvalidParameters("density matrix dimension mismatch");
  if (!(dt > 0.0)) throw InvalidParameters("time step must be positive");
  if (t1 <= t0) return rho0;
  long n = std::max<long>(1, static_cast<long>(std::ceil((t1 - t0) / dt - 1e-9)));
  double h = (t1 - t0) / n;
  MatC rho = rho0;
  const bool herm = is_hermitian(rho0);
  Generator g(spec);
  for (long k = 0; k < n; ++k) {
    double t = t0 + k * h;
    rho = herm ? rk4_rho(g, t, h, rho) : rk4_general(spec, t, h, rho);
    if (observe) observe(t + h, rho);
  }
  return rho;
}

LindbladTrajectory lindblad_propagate(const LindbladSpec& spec, const MatC& rho0,
                                      const std::vector<double>& t_grid, const LindbladOptions& opt) {
  spec.validate();
  if (t_grid.empty()) throw InvalidParameters("empty time grid");
  if (spec.dim() > opt.dimension_limit)
    throw DimensionLimit("Lindblad dimension exceeds limit");
  LindbladTrajectory tr;
  const cplx tr0 = rho0.trace();
  MatC rho = rho0;
  tr.min_eigenvalue = std::numeric_limits<double>::infinity();
  auto check = [&](const MatC& r) {
    tr.max_trace_error = std::max(tr.max_trace_error, std::abs(r.trace() - tr0));
    if (opt.monitor_positivity) {
      Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
      double lo = es.eigenvalues()(0);
      tr.min_eigenvalue = std::min(tr.min_eigenvalue, lo);
      if (lo < opt.positivity_abort)
        throw NumericalError("density matrix lost positivity (min eigenvalue " + std::to_string(lo) + ")");
    }
  };
  check(rho);
  tr.t.push_back(t_grid[0]);
  tr.rho.push_back(rho);
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (t_grid[i] < t_grid[i - 1]) throw InvalidParameters("time grid must be ascending");
    rho = lindblad_evolve(spec, rho, t_grid[i - 1], t_grid[i], opt.dt);
    check(rho);
    tr.t.push_back(t_grid[i]);
    tr.rho.push_back(rho);
  }
  if (tr.max_trace_error > opt.trace_tol)
    throw NumericalError("trace drift " + std::to_string(tr.max_trace_error) + " exceeds tolerance");
  return tr;
}

namespace {

SpMatC sparse_of(const MatC& m) {
  SpMatC s = m.sparseView(1.0, 1e-15);
  s.makeCompressed();
  return s;
}

SpMatC sparse_kron(const SpMatC& a, const SpMatC& b) {
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Index ka = 0; ka < a.outerSize(); ++ka)
    for (SpMatC::InnerIterator ia(a, ka); ia; ++ia)
      for (Index kb = 0; kb < b.outerSize(); ++kb)
        for (SpMatC::InnerIterator ib(b, kb); ib; ++ib)
          t.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
  SpMatC k(a.rows() * b.rows(), a.cols() * b.cols());
  k.setFromTriplets(t.begin(), t.end());
  return k;
}

SpMatC commutator_super(const MatC& h) {
  const Index n = h.rows();
  SpMatC I(n, n);
  I.setIdentity();
  SpMatC hs = sparse_of(h);
  SpMatC ht = sparse_of(h.transpose());
  return -kI * (sparse_kron(I, hs) - sparse_kron(ht, I));
}

}  // namespace

MatC lindblad_evolve_sparse(const LindbladSpec& spec, const MatC& rho0, double t0, double t1, double dt,
                            const std::function<void(double, const MatC&)>& observe, int observe_every) {
  spec.validate();
  const Index n = spec.dim();
  if (rho0.rows() != n || rho0.cols() != n) throw InvalidParameters("density matrix dimension mismatch");
  if (!(dt > 0.0)) throw InvalidParameters("time step must be positive");
  if (t1 <= t0) return rho0;
  SpMatC I(n, n);
  I.setIdentity();
  SpMatC L0 = commutator_super(spec.hamiltonian);
  for (const auto& c : spec.collapse) {
    if (c.rate == 0.0) continue;
    MatC xdx = c.op.adjoint() * c.op;
    SpMatC d = sparse_kron(sparse_of(c.op.conjugate()), sparse_of(c.op)) - 0.5 * sparse_kron(I, sparse_of(xdx)) -
               0.5 * sparse_kron(sparse_of(xdx.transpose()), I);
    L0 += c.rate * d;
  }
  std::vector<SpMatC> Ld;
  for (const auto& d : spec.drive) Ld.push_back(commutator_super(d.op));
  auto rhs = [&](double t, const VecC& v) {
    VecC out = L0 * v;
    for (std::size_t k = 0; k < Ld.size(); ++k) {
      double f = spec.drive[k].f(t);
      if (f != 0.0) out += f * (Ld[k] * v);
    }
    return out;
  };
  long steps = std::max<long>(1, static_cast<long>(std::ceil((t1 - t0) / dt - 1e-9)));
  double h = (t1 - t0) / steps;
  VecC v = Eigen::Map<const VecC>(rho0.data(), n * n);
  for (long k = 0; k < steps; ++k) {
    double t = t0 + k * h;
    VecC k1 = rhs(t, v);
    VecC k2 = rhs(t + 0.5 * h, v + (0.5 * h) * k1);
    VecC k3 = rhs(t + 0.5 * h, v + (0.5 * h) * k2);
    VecC k4 = rhs(t + h, v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (observe && ((k + 1) % std::max(1, observe_every) == 0 || k + 1 == steps))
      observe(t + h, Eigen::Map<const MatC>(v.data(), n, n));
  }
  return Eigen::Map<const MatC>(v.data(), n, n);
}

SteadyState steady_state(const LindbladSpec& spec, Index dimension_limit) {
  spec.validate();
  const Index n = spec.dim();
  if (n * n > dimension_limit) throw DimensionLimit("Liouvillian dimension exceeds dense limit");
  MatC L = liouvillian(spec);
  Eigen::FullPivLU<MatC> lu(L);
  lu.setThreshold(1e-10);
  if (lu.dimensionOfKernel() != 1)
    throw NumericalError("Liouvillian null space has dimension " + std::to_string(lu.dimensionOfKernel()));
  VecC v = lu.kernel().col(0);
  MatC rho = Eigen::Map<MatC>(v.data(), n, n);
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  SteadyState s;
  s.rho = rho;
  s.residual = lindblad_rhs(spec, 0.0, rho).cwiseAbs().maxCoeff();
  return s;
}

}  // namespace zp
