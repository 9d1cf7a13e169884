#include "zeropi/gate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "zeropi/parallel.hpp"

namespace zp {

GateModel::GateModel(const CircuitParams& p, const BasisSpec& b, int M, const GateModel* reference)
    : params_(p), basis_(b) {
  if (M < 3) throw InvalidParameters("gate model needs at least three levels");
  ThetaPhiModel tpm(p, b);
  spectrum_ = diagonalize(tpm, M);
  if (spectrum_.doublets.empty() || spectrum_.doublets.front().lower != 0)
    throw NumericalError("logical doublet could not be identified");
  if (reference) {
    const MatC& rv = reference->spectrum_.eigenvectors;
    if (rv.rows() != spectrum_.eigenvectors.rows())
      throw InvalidParameters("reference model uses a different basis");
    for (int i = 0; i < 2; ++i) {
      cplx o = rv.col(i).dot(spectrum_.eigenvectors.col(i));
      if (std::abs(o) > 0.0) spectrum_.eigenvectors.col(i) *= std::conj(o) / std::abs(o);
    }
  }
  energies_ = spectrum_.eigenvalues.array() - spectrum_.eigenvalues(0);
  n_theta_ = n_theta_table(tpm, spectrum_, M);
  n_phi_ = n_phi_table(tpm, spectrum_, M);
  phi_ = phi_table(tpm, spectrum_, M);
  ModeCapacitances c = mode_capacitances(p);
  drive_scale_ = 2.0 * p.C_g / c.theta;
  drive_ = drive_scale_ * (n_theta_ - (p.C_J * p.dC_J / c.phi) * n_phi_);
  drive_ = 0.5 * (drive_ + drive_.adjoint()).eval();
}

RotationAngles rotation_angles(const Mat2c& u) {
  const cplx a0 = 0.5 * (u(0, 0) + u(1, 1));
  const cplx ax = 0.5 * (u(0, 1) + u(1, 0));
  const cplx ay = 0.5 * kI * (u(0, 1) - u(1, 0));
  const cplx az = 0.5 * (u(0, 0) - u(1, 1));
  // u = e^{i alpha} (c - i s n.sigma): (a0, i a) share one phase
  std::array<cplx, 4> q{a0, kI * ax, kI * ay, kI * az};
  int big = 0;
  for (int k = 1; k < 4; ++k)
    if (std::abs(q[k]) > std::abs(q[big])) big = k;
  cplx ph = std::abs(q[big]) > 0.0 ? std::conj(q[big]) / std::abs(q[big]) : cplx(1.0);
  Eigen::Vector4d r;
  for (int k = 0; k < 4; ++k) r(k) = (ph * q[k]).real();
  r.normalize();
  RotationAngles out;
  Eigen::Vector3d v = r.tail<3>();
  double s = v.norm();
  out.angle = 2.0 * std::atan2(s, std::abs(r(0)));
  if (s > 0.0) {
    Eigen::Vector3d n = v / s;
    out.phi_xz = std::atan2(std::abs(n(2)), std::abs(n(0)));
    out.phi_xy = std::asin(std::min(1.0, std::abs(n(1))));
  }
  out.far_from_pi = std::abs(out.angle - kPi) > 0.2;
  return out;
}

double average_fidelity(const Mat2c& target, const Mat2c& u) {
  Mat2c M = target.adjoint() * u;
  return ((M * M.adjoint()).trace().real() + std::norm(M.trace())) / 6.0;
}

void closest_unitary(const Mat2c& u, Mat2c& closest, Eigen::Vector2d& singular, double& distance) {
  Eigen::JacobiSVD<Mat2c> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  singular = svd.singularValues();
  closest = svd.matrixU() * svd.matrixV().adjoint();
  distance = std::max(std::abs(1.0 - singular(0)), std::abs(1.0 - singular(1)));
}

GateResult simulate_gate(const GateModel& m, const PulseSpec& pulse, const PropagationOptions& opt) {
  MatC H0 = m.energies().cast<cplx>().asDiagonal();
  Propagation prop = propagate_unitary(H0, m.drive(), pulse, opt);
  GateResult r;
  r.pulse_used = pulse;
  r.unitarity_defect = prop.unitarity_defect;
  r.u_reduced = prop.U.topLeftCorner(2, 2);
  closest_unitary(r.u_reduced, r.u_closest, r.singular_values, r.distance);
  r.fidelity = std::clamp(average_fidelity(r.u_closest, r.u_reduced), 0.0, 1.0);
  r.leakage = 1.0 - 0.5 * r.singular_values.squaredNorm();
  RotationAngles a = rotation_angles(r.u_closest);
  r.phi_xz = a.phi_xz;
  r.phi_xy = a.phi_xy;
  r.rotation = a.angle;
  r.rotation_flag = a.far_from_pi;
  r.hyperbola = m.omega_of(pulse.amplitude) * pulse.t_gate / kPi;
  return r;
}

namespace {

struct Candidate {
  double cost = std::numeric_limits<double>::infinity();
  GateResult result;
};

}  // namespace

OptimizedGate optimize_pulse(const GateModel& m, const SearchBox& box, int workers) {
  if (!(box.omega_max > box.omega_min) || !(box.t_max > box.t_min) || box.omega_min <= 0.0 ||
      box.t_min <= 0.0 || box.grid < 2)
    throw InvalidParameters("invalid pulse search box");
  int evaluations = 0;
  auto evaluate = [&](double u, double v) {
    u = std::clamp(u, 0.0, 1.0);
    v = std::clamp(v, 0.0, 1.0);
    PulseSpec pulse;
    pulse.amplitude = m.eV_of(box.omega_min + u * (box.omega_max - box.omega_min));
    pulse.t_gate = box.t_min + v * (box.t_max - box.t_min);
    Candidate c;
    c.result = simulate_gate(m, pulse);
    c.cost = c.result.distance;
    // only a pi rotation counts as the target operation
    if (std::abs(c.result.rotation - kPi) > box.rotation_window) c.cost += 1.0;
    if (box.hyperbola_window > 0.0 && std::abs(c.result.hyperbola - 1.0) > box.hyperbola_window) c.cost += 1.0;
    return c;
  };

  const int g = box.grid;
  auto grid = parallel_map(static_cast<std::size_t>(g) * g, workers, [&](std::size_t k) {
    double u = static_cast<double>(k / g) / (g - 1);
    double v = static_cast<double>(k % g) / (g - 1);
    return evaluate(u, v);
  });
  evaluations += g * g;
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (grid[k].cost < grid[best].cost) best = k;

  // Nelder-Mead on the unit square from the best grid point
  struct Vertex {
    Eigen::Vector2d x;
    Candidate c;
  };
  const double step = 1.0 / (g - 1);
  Eigen::Vector2d x0(static_cast<double>(best / g) / (g - 1), static_cast<double>(best % g) / (g - 1));
  auto clampv = [](Eigen::Vector2d x) { return Eigen::Vector2d(std::clamp(x(0), 0.0, 1.0), std::clamp(x(1), 0.0, 1.0)); };
  auto make = [&](const Eigen::Vector2d& x) {
    Eigen::Vector2d y = clampv(x);
    ++evaluations;
    return Vertex{y, evaluate(y(0), y(1))};
  };
  std::array<Vertex, 3> s{Vertex{x0, grid[best]},
                          make(x0 + Eigen::Vector2d(x0(0) + step <= 1.0 ? step : -step, 0.0)),
                          make(x0 + Eigen::Vector2d(0.0, x0(1) + step <= 1.0 ? step : -step))};
  for (int it = 0; it < box.max_iterations; ++it) {
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.c.cost < b.c.cost; });
    if (s[2].c.cost - s[0].c.cost < box.tol) break;
    Eigen::Vector2d centroid = 0.5 * (s[0].x + s[1].x);
    Vertex r = make(centroid + (centroid - s[2].x));
    if (r.c.cost < s[0].c.cost) {
      Vertex e = make(centroid + 2.0 * (centroid - s[2].x));
      s[2] = e.c.cost < r.c.cost ? e : r;
    } else if (r.c.cost < s[1].c.cost) {
      s[2] = r;
    } else {
      Vertex c = r.c.cost < s[2].c.cost ? make(centroid + 0.5 * (r.x - centroid))
                                        : make(centroid + 0.5 * (s[2].x - centroid));
      if (c.c.cost < std::min(r.c.cost, s[2].c.cost)) {
        s[2] = c;
      } else {
        for (int k = 1; k < 3; ++k) s[k] = make(s[0].x + 0.5 * (s[k].x - s[0].x));
      }
    }
  }
  std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.c.cost < b.c.cost; });
  const Candidate& top = s[0].c.cost < grid[best].cost ? s[0].c : grid[best];
  if (!(top.cost < box.distance_threshold))
    throw OptimizationFailed("no pulse in the search box reached distance below " +
                                 std::to_string(box.distance_threshold),
                             top.result);
  OptimizedGate out;
  out.pulse = top.result.pulse_used;
  out.result = top.result;
  out.evaluations = evaluations;
  return out;
}

Excursion multilevel_excursion(const GateModel& m, const PulseSpec& pulse, int samples, double threshold) {
  MatC H0 = m.energies().cast<cplx>().asDiagonal();
  VecC psi0 = VecC::Zero(m.levels());
  psi0(0) = 1.0;
  Excursion ex;
  auto states = propagate_states(H0, m.drive(), pulse, psi0, samples, &ex.t);
  ex.populations.resize(static_cast<Index>(states.size()), m.levels());
  for (std::size_t k = 0; k < states.size(); ++k) {
    ex.populations.row(static_cast<Index>(k)) = states[k].cwiseAbs2().transpose();
    ex.max_norm_error = std::max(ex.max_norm_error, std::abs(states[k].squaredNorm() - 1.0));
  }
  // group levels into doublets (unpaired levels stand alone)
  std::vector<int> group(m.levels(), -1);
  int ngroups = 0;
  for (const auto& d : m.spectrum().doublets) group[d.lower] = group[d.upper] = ngroups++;
  for (int i = 0; i < m.levels(); ++i)
    if (group[i] < 0) group[i] = ngroups++;
  std::vector<double> peak(ngroups, 0.0);
  for (Index k = 0; k < ex.populations.rows(); ++k) {
    std::vector<double> pop(ngroups, 0.0);
    for (int i = 0; i < m.levels(); ++i) pop[group[i]] += ex.populations(k, i);
    for (int gi = 0; gi < ngroups; ++gi) peak[gi] = std::max(peak[gi], pop[gi]);
  }
  for (int gi = 0; gi < ngroups; ++gi)
    if (gi != group[0] && gi != group[1] && peak[gi] > threshold) ++ex.occupied_doublets;
  return ex;
}

std::vector<GateMapPoint> gate_parameter_map(const CircuitParams& base, const std::vector<double>& E_J,
                                             const std::vector<double>& E_C_theta, const BasisSpec& b,
                                             int M, const SearchBox& box, int workers) {
  const std::size_t nj = E_J.size(), nc = E_C_theta.size();
  return parallel_map(nj * nc, workers, [&](std::size_t k) {
    GateMapPoint pt;
    pt.E_J = E_J[k / nc];
    pt.E_C_theta = E_C_theta[k % nc];
    try {
      CircuitParams p = base;
      p.E_J = pt.E_J;
      p.E_C_theta = pt.E_C_theta;
      p.sync_capacitances();
      GateModel m(p, b, M);
      OptimizedGate g = optimize_pulse(m, box, 1);
      pt.fidelity = g.result.fidelity;
      pt.distance = g.result.distance;
      pt.phi_xz = g.result.phi_xz;
      pt.phi_xy = g.result.phi_xy;
      pt.omega = m.omega_of(g.pulse.amplitude);
      pt.t_gate = g.pulse.t_gate;
      pt.hyperbola = g.result.hyperbola;
      pt.occupied_doublets = multilevel_excursion(m, g.pulse).occupied_doublets;
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    return pt;
  });
}

std::vector<RobustnessPoint> robustness_scan(const GateModel& reference, const OptimizedGate& ref_gate,
                                             const std::string& axis, const std::vector<double>& grid,
                                             int workers) {
  if (axis != "sigma" && axis != "phi_ext" && axis != "dE_J" && axis != "dC_J")
    throw InvalidParameters("robustness axis must be sigma, phi_ext, dE_J or dC_J");
  const Mat2c target = ref_gate.result.u_closest;
  const double f0 = average_fidelity(target, ref_gate.result.u_reduced);
  return parallel_map(grid.size(), workers, [&](std::size_t i) {
    RobustnessPoint pt;
    pt.value = grid[i];
    try {
      GateResult r;
      if (axis == "sigma") {
        PulseSpec pulse = ref_gate.pulse;
        pulse.shape = PulseShape::tanh;
        pulse.sigma = grid[i];
        r = simulate_gate(reference, pulse);
      } else {
        CircuitParams p = reference.params();
        set_named_param(p, axis, grid[i]);
        GateModel m(p, reference.basis(), reference.levels(), &reference);
        r = simulate_gate(m, ref_gate.pulse);
      }
      pt.fidelity = average_fidelity(target, r.u_reduced);
      pt.relative_change = (pt.fidelity - f0) / f0;
      pt.leakage = r.leakage;
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    return pt;
  });
}

DissipativeGate dissipative_gate_fidelity(const GateModel& m, int n_zeta, const PulseSpec& pulse,
                                          const Mat2c& target, const DissipationRates& rates,
                                          double dt) {
  if (n_zeta < 1) throw InvalidParameters("zeta cutoff must be >= 1");
  const CircuitParams& p = m.params();
  const int M = m.levels();
  const Index dim = static_cast<Index>(M) * n_zeta;
  if (dim > 400) throw DimensionLimit("dissipative gate dimension " + std::to_string(dim) + " exceeds 400");
  ModeCapacitances c = mode_capacitances(p);
  const double ec_zeta = 1.0 / c.zeta;
  const double wz = 4.0 * std::sqrt(ec_zeta * p.E_L);
  const double lz = std::pow(4.0 * ec_zeta / p.E_L, 0.25);

  MatC a = MatC::Zero(n_zeta, n_zeta);
  for (int k = 1; k < n_zeta; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  MatC ad = a.adjoint();
  MatC nz = kI * (ad - a) / (std::sqrt(2.0) * lz);
  MatC xz = lz * (ad + a) / std::sqrt(2.0);
  MatC Iz = MatC::Identity(n_zeta, n_zeta);
  MatC Iq = MatC::Identity(M, M);
  auto kron = [](const MatC& x, const MatC& y) {
    MatC k(x.rows() * y.rows(), x.cols() * y.cols());
    for (Index i = 0; i < x.rows(); ++i)
      for (Index j = 0; j < x.cols(); ++j) k.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return k;
  };

  MatC Eq = m.energies().cast<cplx>().asDiagonal();
  MatC Ez = MatC::Zero(n_zeta, n_zeta);
  for (int k = 0; k < n_zeta; ++k) Ez(k, k) = wz * k;
  MatC H = kron(Eq, Iz) + kron(Iq, Ez);
  if (p.dC != 0.0) H += -8.0 * p.C * p.dC / (c.zeta * c.theta) * kron(m.n_theta(), nz);
  if (p.dE_L != 0.0) H += p.E_L * p.dE_L * kron(m.phi(), xz);
  MatC D = kron(m.drive(), Iz);
  if (p.dC != 0.0) D += -2.0 * p.C_g * p.C * p.dC / (c.zeta * c.theta) * kron(Iq, nz);

  LindbladSpec spec;
  spec.hamiltonian = 0.5 * (H + H.adjoint());
  spec.drive.push_back({[&pulse](double t) { return pulse.value(t); }, 0.5 * (D + D.adjoint())});

  DissipativeGate out;
  out.omega_zeta = wz;
  out.kappa_zeta = wz / rates.Q_zeta;
  out.n_zeta = rates.n_zeta >= 0.0 ? rates.n_zeta
                                   : thermal_rates(wz, rates.temperature, rates.Q_zeta, p.omega_p_over_2pi).n_th;
  if (rates.zeta_loss) {
    spec.collapse.push_back({kron(Iq, a), out.kappa_zeta * (out.n_zeta + 1.0), "zeta_down"});
    spec.collapse.push_back({kron(Iq, ad), out.kappa_zeta * out.n_zeta, "zeta_up"});
  }
  MatC s01 = MatC::Zero(M, M), s10 = MatC::Zero(M, M), sz = MatC::Zero(M, M);
  s01(0, 1) = 1.0;
  s10(1, 0) = 1.0;
  sz(1, 1) = 1.0;
  sz(0, 0) = -1.0;
  if (rates.gamma_relax > 0.0) spec.collapse.push_back({kron(s01, Iz), rates.gamma_relax, "relax"});
  if (rates.gamma_excite > 0.0) spec.collapse.push_back({kron(s10, Iz), rates.gamma_excite, "excite"});
  if (rates.gamma_phi > 0.0) spec.collapse.push_back({kron(sz, Iz), 0.5 * rates.gamma_phi, "dephase"});

  // truncated thermal state of zeta
  VecR pz(n_zeta);
  double ratio = out.n_zeta / (1.0 + out.n_zeta);
  for (int k = 0; k < n_zeta; ++k) pz(k) = std::pow(ratio, k);
  pz /= pz.sum();
  MatC rz = pz.cast<cplx>().asDiagonal();

  if (dt <= 0.0) {
    Eigen::SelfAdjointEigenSolver<MatC> es(spec.hamiltonian, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<MatC> ds(spec.drive[0].op, Eigen::EigenvaluesOnly);
    double peak = 0.0;
    for (int k = 0; k <= 200; ++k)
      peak = std::max(peak, std::abs(pulse.value(pulse.t_begin() + (pulse.t_end() - pulse.t_begin()) * k / 200.0)));
    double norm = es.eigenvalues().cwiseAbs().maxCoeff() + peak * ds.eigenvalues().cwiseAbs().maxCoeff();
    dt = 0.05 / std::max(norm, 1e-12);
  }

  // Hermitian probes |0>, |1>, |+>, |+i>
  const cplx r2 = 1.0 / std::sqrt(2.0);
  std::array<VecC, 4> probes;
  for (auto& v : probes) v = VecC::Zero(M);
  probes[0](0) = 1.0;
  probes[1](1) = 1.0;
  probes[2](0) = r2;
  probes[2](1) = r2;
  probes[3](0) = r2;
  probes[3](1) = kI * r2;
  std::array<Mat2c, 4> outs;
  for (int k = 0; k < 4; ++k) {
    MatC rq = probes[k] * probes[k].adjoint();
    MatC rho = lindblad_evolve(spec, kron(rq, rz), pulse.t_begin(), pulse.t_end(), dt);
    // partial trace over zeta, logical block
    Mat2c red = Mat2c::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int z = 0; z < n_zeta; ++z) red(i, j) += rho(i * n_zeta + z, j * n_zeta + z);
    outs[k] = red;
  }
  // refer to the [t_start, t_start + t_gate] window as in the unitary case
  double before = pulse.t_start - pulse.t_begin();
  double after = pulse.t_end() - (pulse.t_start + pulse.t_gate);
  Eigen::Vector2d el(m.energies()(0), m.energies()(1));
  Mat2c frame = Mat2c::Zero();
  for (int i = 0; i < 2; ++i) frame(i, i) = std::polar(1.0, el(i) * after);
  Mat2c frame_in = Mat2c::Zero();
  for (int i = 0; i < 2; ++i) frame_in(i, i) = std::polar(1.0, el(i) * before);

  // E(|0><1|) = E(|+><+|) + i E(|+i><+i|) - (1+i)/2 (E(|0><0|) + E(|1><1|))
  std::array<std::array<Mat2c, 2>, 2> E;
  E[0][0] = outs[0];
  E[1][1] = outs[1];
  E[0][1] = outs[2] + kI * outs[3] - 0.5 * (1.0 + kI) * (outs[0] + outs[1]);
  E[1][0] = E[0][1].adjoint();
  double f = 0.0, trace_sum = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      // input phase of the frame shift acts on |i><j| before the channel
      cplx in = frame_in(i, i) * std::conj(frame_in(j, j));
      Mat2c e = frame * E[i][j] * frame.adjoint() * in;
      f += (target.col(i).adjoint() * e * target.col(j))(0, 0).real();
      if (i == j) trace_sum += e.trace().real();
    }
  out.fidelity = std::clamp((f + trace_sum) / 6.0, 0.0, 1.0);
  out.leakage = 1.0 - 0.5 * trace_sum;
  return out;
}

}  // namespace zp
