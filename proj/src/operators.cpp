#include "zeropi/operators.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace zp {

namespace {

SpMatC identity(Index n) {
  SpMatC id(n, n);
  id.setIdentity();
  return id;
}

SpMatC sparse_of(const MatC& m) { return m.sparseView(0.0, 0.0); }

SpMatC diagonal_of(const VecC& d) {
  SpMatC s(d.size(), d.size());
  s.reserve(Eigen::VectorXi::Constant(d.size(), 1));
  for (Index i = 0; i < d.size(); ++i)
    if (d(i) != cplx(0.0)) s.insert(i, i) = d(i);
  s.makeCompressed();
  return s;
}

SpMatC diagonal_of(const VecR& d) { return diagonal_of(VecC(d.cast<cplx>())); }

SpMatC charge_n(int nmax, double offset) {
  VecR d(2 * nmax + 1);
  for (int k = 0; k <= 2 * nmax; ++k) d(k) = static_cast<double>(k - nmax) - offset;
  return diagonal_of(d);
}

SpMatC zero_matrix(Index n) { return SpMatC(n, n); }

OperatorMatrix wrap(SpMatC m, const BasisLabels& labels, bool hermitian = true) {
  m.prune(cplx(0.0));
  m.makeCompressed();
  OperatorMatrix op{std::move(m), labels, hermitian};
  op.check();
  return op;
}

}  // namespace

double OperatorMatrix::hermiticity_defect() const {
  SpMatC diff = data - SpMatC(data.adjoint());
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SpMatC::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

void OperatorMatrix::check() const {
  Index expected = 1;
  for (const auto& [label, n] : basis) expected *= n;
  if (expected != data.rows() || data.rows() != data.cols())
    throw InvalidParameters("operator dimension does not match declared basis");
  if (hermitian && hermiticity_defect() >= 1e-12)
    throw NumericalError("operator flagged hermitian violates |A - A^H| < 1e-12");
}

bool OperatorMatrix::is_zero(double tol) const {
  for (int k = 0; k < data.outerSize(); ++k)
    for (SpMatC::InnerIterator it(data, k); it; ++it)
      if (std::abs(it.value()) > tol) return false;
  return true;
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.basis != b.basis) throw InvalidParameters("operator sum on different bases");
  return OperatorMatrix{a.data + b.data, a.basis, a.hermitian && b.hermitian};
}

OscillatorSector::OscillatorSector(double E_C, double E_L, int size) : size_(size) {
  if (size < 1) throw InvalidParameters("oscillator cutoff must be >= 1");
  if (!(E_C > 0.0) || !(E_L > 0.0)) throw InvalidParameters("oscillator energies must be positive");
  length_ = std::pow(4.0 * E_C / E_L, 0.25);
  omega_ = 4.0 * std::sqrt(E_C * E_L);

  MatR x = MatR::Zero(size, size);
  MatR anti = MatR::Zero(size, size);  // (a^dag - a)
  for (int k = 1; k < size; ++k) {
    double s = std::sqrt(static_cast<double>(k));
    x(k - 1, k) = x(k, k - 1) = s * length_ / std::sqrt(2.0);
    anti(k, k - 1) = s;
    anti(k - 1, k) = -s;
  }
  Eigen::SelfAdjointEigenSolver<MatR> es(x);
  nodes_ = es.eigenvalues();
  to_fock_ = es.eigenvectors();
  // fix column signs so the DVR basis is reproducible
  for (int j = 0; j < size; ++j) {
    Index imax;
    to_fock_.col(j).cwiseAbs().maxCoeff(&imax);
    if (to_fock_(imax, j) < 0.0) to_fock_.col(j) *= -1.0;
  }

  VecR ladder(size);
  for (int k = 0; k < size; ++k) ladder(k) = omega_ * (k + 0.5);
  h0_ = to_fock_.transpose() * ladder.asDiagonal() * to_fock_;
  h0_ = 0.5 * (h0_ + h0_.transpose()).eval();
  MatR nr = to_fock_.transpose() * anti * to_fock_ / (std::sqrt(2.0) * length_);
  nr = 0.5 * (nr - nr.transpose()).eval();
  n_ = kI * nr.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<MatC> ns(n_, Eigen::EigenvaluesOnly);
  n_norm_ = ns.eigenvalues().cwiseAbs().maxCoeff();
}

VecR OscillatorSector::cos_shift(double a) const {
  return (nodes_.array() - a).cos().matrix();
}

VecR OscillatorSector::sin_shift(double a) const {
  return (nodes_.array() - a).sin().matrix();
}

SectorSet::SectorSet(const CircuitParams& p, const BasisSpec& b, ModeSet modes)
    : modes_(modes), basis_(b), phi_(p.E_C_phi, p.E_L, b.n_fock_phi) {
  b.validate();
  labels_.push_back({"theta", b.charge_dim()});
  labels_.push_back({"phi", b.n_fock_phi});
  if (modes.zeta) {
    double ec_zeta = 1.0 / mode_capacitances(p).zeta;
    zeta_.emplace_back(ec_zeta, p.E_L, b.n_fock_zeta);
    labels_.push_back({"zeta", b.n_fock_zeta});
  }
  if (modes.sigma) labels_.push_back({"sigma", 2 * b.n_charge_sigma + 1});
  if (modes.resonator) labels_.push_back({"resonator", b.n_fock_res});
  dim_ = 1;
  for (const auto& [l, n] : labels_) dim_ *= n;
  if (dim_ > b.dimension_limit)
    throw DimensionLimit("Hilbert dimension " + std::to_string(dim_) + " exceeds limit " +
                         std::to_string(b.dimension_limit));
}

const OscillatorSector& SectorSet::zeta() const {
  if (zeta_.empty()) throw ConfigError("zeta sector not included in basis");
  return zeta_.front();
}

int SectorSet::position(const std::string& label) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i].first == label) return static_cast<int>(i);
  throw ConfigError("sector '" + label + "' not included in basis");
}

SpMatC SectorSet::embed(const std::string& label, const SpMatC& local) const {
  int pos = position(label);
  SpMatC out = identity(1);
  for (size_t i = 0; i < labels_.size(); ++i) {
    SpMatC f = (static_cast<int>(i) == pos) ? local : identity(labels_[i].second);
    SpMatC k = Eigen::kroneckerProduct(out, f);
    out = k;
  }
  return out;
}

SpMatC SectorSet::embed(const std::string& l1, const SpMatC& o1, const std::string& l2,
                        const SpMatC& o2) const {
  int p1 = position(l1), p2 = position(l2);
  if (p1 == p2) throw InvalidParameters("embed: same sector twice");
  SpMatC out = identity(1);
  for (size_t i = 0; i < labels_.size(); ++i) {
    int ii = static_cast<int>(i);
    SpMatC f = ii == p1 ? o1 : ii == p2 ? o2 : identity(labels_[i].second);
    SpMatC k = Eigen::kroneckerProduct(out, f);
    out = k;
  }
  return out;
}

SpMatC SectorSet::n_charge(const std::string& label) const {
  if (label == "theta") return charge_n(basis_.n_charge_max, 0.0);
  if (label == "sigma") return charge_n(basis_.n_charge_sigma, 0.0);
  throw InvalidParameters("not a charge sector: " + label);
}

SpMatC SectorSet::exp_i_theta() const {
  int d = basis_.charge_dim();
  SpMatC s(d, d);
  for (int k = 0; k + 1 < d; ++k) s.insert(k + 1, k) = 1.0;
  s.makeCompressed();
  return s;
}

SpMatC SectorSet::n_osc(const std::string& label) const {
  return sparse_of(label == "phi" ? phi_.n() : zeta().n());
}

SpMatC SectorSet::x_osc(const std::string& label) const {
  return diagonal_of(label == "phi" ? phi_.nodes() : zeta().nodes());
}

SpMatC SectorSet::h0_osc(const std::string& label) const {
  const MatR& h = label == "phi" ? phi_.h0() : zeta().h0();
  return sparse_of(h.cast<cplx>());
}

SpMatC SectorSet::res_a() const {
  int n = basis_.n_fock_res;
  SpMatC a(n, n);
  for (int k = 1; k < n; ++k) a.insert(k - 1, k) = std::sqrt(static_cast<double>(k));
  a.makeCompressed();
  return a;
}

SpMatC SectorSet::n_mode(Mode m) const {
  switch (m) {
    case Mode::theta: return embed("theta", n_charge("theta"));
    case Mode::phi: return embed("phi", n_osc("phi"));
    case Mode::zeta: return embed("zeta", n_osc("zeta"));
    case Mode::sigma: return embed("sigma", n_charge("sigma"));
  }
  throw InvalidParameters("bad mode");
}

OperatorMatrix build_h_symm(const CircuitParams& p, const BasisSpec& b, ModeSet modes) {
  p.validate();
  SectorSet s(p, b, modes);
  SpMatC nt = charge_n(b.n_charge_max, p.n_g_theta);
  SpMatC h = s.embed("theta", SpMatC(4.0 * p.E_C_theta * nt * nt));
  h += s.embed("phi", s.h0_osc("phi"));
  SpMatC e = s.exp_i_theta();
  SpMatC cos_t = 0.5 * (e + SpMatC(e.adjoint()));
  SpMatC cos_p = diagonal_of(s.phi().cos_shift(0.5 * p.phi_ext));
  h += -2.0 * p.E_J * s.embed("theta", cos_t, "phi", cos_p);
  if (modes.zeta) h += s.embed("zeta", s.h0_osc("zeta"));
  if (modes.sigma) {
    double ec_sigma = 1.0 / mode_capacitances(p).sigma;
    SpMatC ns = s.n_charge("sigma");
    h += s.embed("sigma", SpMatC(4.0 * ec_sigma * ns * ns));
  }
  if (modes.resonator) h += s.embed("resonator", zero_matrix(b.n_fock_res));
  return wrap(h, s.labels());
}

OperatorMatrix build_h_asymm(const CircuitParams& p, const BasisSpec& b, ModeSet modes) {
  p.validate();
  if (p.has_zeta_disorder() && !modes.zeta)
    throw ConfigError("dC or dE_L is nonzero but the zeta sector is not in the basis");
  SectorSet s(p, b, modes);
  ModeCapacitances c = mode_capacitances(p);
  SpMatC h = zero_matrix(s.dim());
  SpMatC nt = s.n_charge("theta");
  if (p.dC != 0.0)
    h += -8.0 * p.C * p.dC / (c.zeta * c.theta) * s.embed("theta", nt, "zeta", s.n_osc("zeta"));
  if (p.dC_J != 0.0)
    h += -8.0 * p.C_J * p.dC_J / (c.phi * c.theta) * s.embed("theta", nt, "phi", s.n_osc("phi"));
  if (p.dE_J != 0.0) {
    SpMatC e = s.exp_i_theta();
    SpMatC sin_t = (e - SpMatC(e.adjoint())) * cplx(0.0, -0.5);
    SpMatC sin_p = diagonal_of(s.phi().sin_shift(0.5 * p.phi_ext));
    h += p.E_J * p.dE_J * s.embed("theta", sin_t, "phi", sin_p);
  }
  if (p.dE_L != 0.0)
    h += p.E_L * p.dE_L * s.embed("phi", s.x_osc("phi"), "zeta", s.x_osc("zeta"));
  return wrap(h, s.labels());
}

Eigen::Vector4d normal_mode_disorder(const std::array<double, 4>& f) {
  Eigen::Vector4d v(f[0], f[1], f[2], f[3]);
  return normal_mode_matrix() * v;
}

namespace {

int mode_row(Mode m) {
  switch (m) {
    case Mode::phi: return 0;
    case Mode::theta: return 1;
    case Mode::zeta: return 2;
    case Mode::sigma: return 3;
  }
  return -1;
}

double mode_cap(const ModeCapacitances& c, Mode m) {
  switch (m) {
    case Mode::phi: return c.phi;
    case Mode::theta: return c.theta;
    case Mode::zeta: return c.zeta;
    case Mode::sigma: return c.sigma;
  }
  return 0.0;
}

bool present(const ModeSet& ms, Mode m) {
  if (m == Mode::zeta) return ms.zeta;
  if (m == Mode::sigma) return ms.sigma;
  return true;
}

}  // namespace

std::map<Mode, OperatorMatrix> build_drive_ops(const CircuitParams& p, const BasisSpec& b,
                                               ModeSet modes, DriveOptions opt) {
  p.validate();
  SectorSet s(p, b, modes);
  ModeCapacitances c = mode_capacitances(p);
  const Mode internal[3] = {Mode::phi, Mode::theta, Mode::zeta};

  std::map<Mode, SpMatC> d;
  for (Mode m : {Mode::phi, Mode::theta, Mode::zeta, Mode::sigma}) {
    if (!present(modes, m)) continue;
    if (m == Mode::sigma && !opt.include_sigma) continue;
    d[m] = 2.0 * p.C_g / mode_cap(c, m) * s.n_mode(m);
  }
  auto add = [&](Mode drive, Mode charge, double coef) {
    if (coef == 0.0 || !d.count(drive) || !present(modes, charge)) return;
    d[drive] += 2.0 * coef * s.n_mode(charge);
  };

  double kj = -p.C_g * p.C_J * p.dC_J / (c.phi * c.theta);
  add(Mode::theta, Mode::phi, kj);
  add(Mode::phi, Mode::theta, kj);
  double kc = -p.C_g * p.C * p.dC / (c.zeta * c.theta);
  if (kc != 0.0 && !modes.zeta) throw ConfigError("dC drive terms need the zeta sector");
  add(Mode::theta, Mode::zeta, kc);
  add(Mode::zeta, Mode::theta, kc);

  if (opt.include_gate_ground) {
    Eigen::Vector4d dg = normal_mode_disorder(p.dC_g);
    Eigen::Vector4d d0 = normal_mode_disorder(p.dC_0);
    const int S = 3;
    for (Mode mu : internal) {
      int r = mode_row(mu);
      double cm = mode_cap(c, mu);
      add(mu, mu, p.C_g / (cm * cm) * ((cm - 0.5 * p.C_g) * dg(S) - 0.5 * p.C_0 * d0(S)));
      if (modes.sigma) {
        add(Mode::sigma, mu,
            p.C_g / (cm * c.sigma) * ((c.sigma - 0.5 * p.C_g) * dg(r) - 0.5 * p.C_0 * d0(r)));
      }
    }
    for (Mode mu : internal)
      for (Mode nu : internal) {
        if (mu == nu) continue;
        int sg = 3 - mode_row(mu) - mode_row(nu);  // the remaining internal mode
        double cn = mode_cap(c, nu);
        add(nu, mu,
            p.C_g / (mode_cap(c, mu) * cn) * ((cn - 0.5 * p.C_g) * dg(sg) - 0.5 * p.C_0 * d0(sg)));
      }
    if (modes.sigma) {
      for (Mode mu : {Mode::phi, Mode::theta, Mode::zeta, Mode::sigma}) {
        int r = mode_row(mu);
        double cm = mode_cap(c, mu);
        add(mu, Mode::sigma,
            p.C_g / (cm * c.sigma) * ((cm - 0.5 * p.C_g) * dg(r) - 0.5 * p.C_0 * d0(r)));
      }
    }
  }

  std::map<Mode, OperatorMatrix> out;
  for (auto& [m, op] : d) out.emplace(m, wrap(op, s.labels()));
  return out;
}

OperatorMatrix build_resonator_coupling(const CircuitParams& p, Mode mode, double eV_rms,
                                        const BasisSpec& b, ModeSet modes) {
  p.validate();
  if (mode == Mode::sigma) throw InvalidParameters("resonator coupling mode must be phi, theta or zeta");
  if (!modes.resonator) throw ConfigError("resonator sector not included in basis");
  if (mode == Mode::zeta && !modes.zeta) throw ConfigError("zeta sector not included in basis");
  SectorSet s(p, b, modes);
  ModeCapacitances c = mode_capacitances(p);
  SpMatC a = s.res_a();
  SpMatC quad = kI * (SpMatC(a.adjoint()) - a);
  std::string label = mode == Mode::theta ? "theta" : mode == Mode::phi ? "phi" : "zeta";
  SpMatC n = mode == Mode::theta ? s.n_charge("theta") : s.n_osc(label);
  double coef = p.C_g / mode_cap(c, mode) * eV_rms;
  return wrap(coef * s.embed(label, n, "resonator", quad), s.labels());
}

OperatorMatrix build_h_dcg_dc0(const CircuitParams& p, const BasisSpec& b, ModeSet modes) {
  p.validate();
  if (!modes.zeta || !modes.sigma) throw ConfigError("gate/ground disorder term needs all four modes");
  SectorSet s(p, b, modes);
  ModeCapacitances c = mode_capacitances(p);
  Eigen::Vector4d dg = normal_mode_disorder(p.dC_g);
  Eigen::Vector4d d0 = normal_mode_disorder(p.dC_0);
  auto w = [&](int r) { return 0.5 * p.C_g * dg(r) + 0.5 * p.C_0 * d0(r); };
  const Mode all[4] = {Mode::phi, Mode::theta, Mode::zeta, Mode::sigma};
  const int S = 3;

  SpMatC h = zero_matrix(s.dim());
  // q_mu q_nu = 8 n_mu n_nu
  for (Mode mu : all) {
    double cm = mode_cap(c, mu);
    double k = -w(S) / (2.0 * cm * cm);
    if (k != 0.0) {
      SpMatC n = s.n_mode(mu);
      h += 8.0 * k * SpMatC(n * n);
    }
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      int sg = 3 - i - j;
      double k = -0.5 * w(sg) / (mode_cap(c, all[i]) * mode_cap(c, all[j]));
      if (k != 0.0) h += 8.0 * k * SpMatC(s.n_mode(all[i]) * s.n_mode(all[j]));
    }
  for (int i = 0; i < 3; ++i) {
    double k = -w(i) / (c.sigma * mode_cap(c, all[i]));
    if (k != 0.0) h += 8.0 * k * SpMatC(s.n_mode(all[i]) * s.n_mode(Mode::sigma));
  }
  return wrap(h, s.labels());
}

ThetaPhiModel::ThetaPhiModel(const CircuitParams& p, const BasisSpec& b)
    : params_(p), basis_(b), phi_(p.E_C_phi, p.E_L, b.n_fock_phi) {
  p.validate();
  b.validate();
  Index dim = static_cast<Index>(b.charge_dim()) * b.n_fock_phi;
  if (dim > b.dimension_limit)
    throw DimensionLimit("Hilbert dimension " + std::to_string(dim) + " exceeds limit");
  int d = b.charge_dim();
  charges_.resize(d);
  for (int k = 0; k < d; ++k) charges_(k) = k - b.n_charge_max;

  ModeCapacitances c = mode_capacitances(p);
  double kcj = -8.0 * p.C_J * p.dC_J / (c.phi * c.theta);
  MatC h0 = phi_.h0().cast<cplx>();
  diag_.resize(d);
  for (int k = 0; k < d; ++k) {
    double q = charges_(k) - p.n_g_theta;
    diag_[k] = h0;
    diag_[k].diagonal().array() += 4.0 * p.E_C_theta * q * q;
    if (kcj != 0.0) diag_[k] += (kcj * charges_(k)) * phi_.n();
  }
  VecR cs = phi_.cos_shift(0.5 * p.phi_ext);
  VecR sn = phi_.sin_shift(0.5 * p.phi_ext);
  VecC off = (-p.E_J * cs).cast<cplx>() + cplx(0.0, 0.5 * p.E_J * p.dE_J) * sn.cast<cplx>();
  upper_.assign(d - 1, off);
}

void ThetaPhiModel::apply(const VecC& in, VecC& out) const {
  const int d = blocks(), n = block_size();
  out.resize(dim());
  for (int k = 0; k < d; ++k) {
    auto o = out.segment(static_cast<Index>(k) * n, n);
    o.noalias() = diag_[k] * in.segment(static_cast<Index>(k) * n, n);
    if (k + 1 < d) o += upper_[k].cwiseProduct(in.segment(static_cast<Index>(k + 1) * n, n));
    if (k > 0) o += upper_[k - 1].conjugate().cwiseProduct(in.segment(static_cast<Index>(k - 1) * n, n));
  }
}

void ThetaPhiModel::apply_n_theta(const VecC& in, VecC& out) const {
  const int n = block_size();
  out.resize(dim());
  for (int k = 0; k < blocks(); ++k)
    out.segment(static_cast<Index>(k) * n, n) = charges_(k) * in.segment(static_cast<Index>(k) * n, n);
}

void ThetaPhiModel::apply_n_phi(const VecC& in, VecC& out) const {
  const int n = block_size();
  out.resize(dim());
  for (int k = 0; k < blocks(); ++k)
    out.segment(static_cast<Index>(k) * n, n).noalias() = phi_.n() * in.segment(static_cast<Index>(k) * n, n);
}

void ThetaPhiModel::apply_cos_theta(const VecC& in, VecC& out) const {
  const int d = blocks(), n = block_size();
  out.setZero(dim());
  for (int k = 0; k < d; ++k) {
    if (k + 1 < d) out.segment(static_cast<Index>(k) * n, n) += 0.5 * in.segment(static_cast<Index>(k + 1) * n, n);
    if (k > 0) out.segment(static_cast<Index>(k) * n, n) += 0.5 * in.segment(static_cast<Index>(k - 1) * n, n);
  }
}

void ThetaPhiModel::apply_parity(const VecC& in, VecC& out) const {
  const int n = block_size();
  out.resize(dim());
  for (int k = 0; k < blocks(); ++k) {
    double sign = (static_cast<long>(std::lround(charges_(k))) % 2 == 0) ? 1.0 : -1.0;
    out.segment(static_cast<Index>(k) * n, n) = sign * in.segment(static_cast<Index>(k) * n, n);
  }
}

double ThetaPhiModel::lower_bound() const {
  ModeCapacitances c = mode_capacitances(params_);
  double kcj = std::abs(8.0 * params_.C_J * params_.dC_J / (c.phi * c.theta));
  double bound = std::numeric_limits<double>::infinity();
  double bmax = upper_.empty() ? 0.0 : upper_.front().cwiseAbs().maxCoeff();
  for (int k = 0; k < blocks(); ++k) {
    double q = charges_(k) - params_.n_g_theta;
    double v = 0.5 * phi_.omega() + 4.0 * params_.E_C_theta * q * q -
               kcj * std::abs(charges_(k)) * phi_.n_norm();
    int neighbours = (k > 0) + (k + 1 < blocks());
    bound = std::min(bound, v - neighbours * bmax);
  }
  return bound;
}

SpMatC ThetaPhiModel::to_sparse() const {
  const int d = blocks(), n = block_size();
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<size_t>(d) * n * (n + 2));
  for (int k = 0; k < d; ++k) {
    Index o = static_cast<Index>(k) * n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (diag_[k](i, j) != cplx(0.0)) t.emplace_back(o + i, o + j, diag_[k](i, j));
    if (k + 1 < d)
      for (int i = 0; i < n; ++i) {
        t.emplace_back(o + i, o + n + i, upper_[k](i));
        t.emplace_back(o + n + i, o + i, std::conj(upper_[k](i)));
      }
  }
  SpMatC h(dim(), dim());
  h.setFromTriplets(t.begin(), t.end());
  return h;
}

}  // namespace zp
