#include "kmslab/toy_chain.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace kmslab::chain {

CouplingTensor::CouplingTensor(std::size_t d) : d_(d), h_(d * d * d * d) {
  if (d == 0) throw std::invalid_argument("CouplingTensor: local dimension must be positive");
}

std::size_t CouplingTensor::index(std::size_t k, std::size_t l, std::size_t r, std::size_t m) const {
  if (k >= d_ || l >= d_ || r >= d_ || m >= d_) throw std::out_of_range("CouplingTensor index out of range");
  return ((k * d_ + l) * d_ + r) * d_ + m;
}

cplx& CouplingTensor::operator()(std::size_t k, std::size_t l, std::size_t r, std::size_t m) {
  return h_[index(k, l, r, m)];
}

cplx CouplingTensor::operator()(std::size_t k, std::size_t l, std::size_t r, std::size_t m) const {
  return h_[index(k, l, r, m)];
}

double CouplingTensor::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < d_; ++k)
    for (std::size_t l = 0; l < d_; ++l)
      for (std::size_t r = 0; r < d_; ++r)
        for (std::size_t m = 0; m < d_; ++m)
          worst = std::max(worst, std::abs((*this)(k, l, r, m) - std::conj((*this)(r, m, k, l))));
  return worst;
}

double CouplingTensor::growth_norm(std::size_t k) const {
  double s = 0.0;
  for (std::size_t l = 0; l < d_; ++l)
    for (std::size_t r = 0; r < d_; ++r)
      for (std::size_t m = 0; m < d_; ++m) s += std::abs((*this)(k, l, r, m));
  return s;
}

double CouplingTensor::shift_norm() const {
  double s = 0.0;
  for (std::size_t l = 0; l < d_; ++l)
    for (std::size_t m = 0; m < d_; ++m) s += std::abs((*this)(0, l, 0, m));
  return s;
}

CouplingTensor CouplingTensor::padded(std::size_t d_new) const {
  if (d_new < d_) throw std::invalid_argument("CouplingTensor::padded: cannot shrink");
  CouplingTensor out(d_new);
  for (std::size_t k = 0; k < d_; ++k)
    for (std::size_t l = 0; l < d_; ++l)
      for (std::size_t r = 0; r < d_; ++r)
        for (std::size_t m = 0; m < d_; ++m) out(k, l, r, m) = (*this)(k, l, r, m);
  return out;
}

Matrix CouplingTensor::pair_operator() const {
  const auto dd = static_cast<Eigen::Index>(d_ * d_);
  Matrix p = Matrix::Zero(dd, dd);
  for (std::size_t k = 0; k < d_; ++k)
    for (std::size_t l = 0; l < d_; ++l)
      for (std::size_t r = 0; r < d_; ++r)
        for (std::size_t m = 0; m < d_; ++m)
          p(static_cast<Eigen::Index>(k + d_ * l), static_cast<Eigen::Index>(r + d_ * m)) += (*this)(k, l, r, m);
  return p;
}

std::size_t ToyChainSpec::dimension() const {
  std::size_t dim = 1;
  for (std::size_t n = 0; n < sites; ++n) {
    dim *= d;
    if (dim > max_dim) return dim;
  }
  return dim;
}

void ToyChainSpec::validate() const {
  if (sites < 2) throw std::invalid_argument("toy chain needs at least 2 sites");
  if (d < 1) throw std::invalid_argument("toy chain needs d >= 1");
  if (coupling.local_dim() != d) throw std::invalid_argument("coupling tensor dimension does not match d");
  if (dimension() > max_dim) throw std::invalid_argument("toy chain dimension d^N exceeds the memory envelope");
  if (coupling.hermiticity_defect() > 1e-12) throw std::invalid_argument("coupling is not Hermitian (h_klrm != conj h_rmkl)");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("toy chain beta must be positive and finite");
}

namespace {

std::vector<std::size_t> site_dims(const ToyChainSpec& spec) { return std::vector<std::size_t>(spec.sites, spec.d); }

Matrix two_site(const ToyChainSpec& spec, const Matrix& local, std::size_t first, std::size_t second) {
  const auto dims = site_dims(spec);
  const std::array<std::size_t, 2> where{first, second};
  return embed_local(local, dims, where);
}

std::size_t left_of(const ToyChainSpec& spec, std::size_t n) { return (n + spec.sites - 1) % spec.sites; }
std::size_t right_of(const ToyChainSpec& spec, std::size_t n) { return (n + 1) % spec.sites; }

// Two-site matrix on (site 0, partner) with site 0 least significant.
struct TwoSite {
  std::size_t d;
  Matrix m;
  explicit TwoSite(std::size_t dd)
      : d(dd), m(Matrix::Zero(static_cast<Eigen::Index>(dd * dd), static_cast<Eigen::Index>(dd * dd))) {}
  void add(std::size_t a0, std::size_t b0, std::size_t as, std::size_t bs, cplx v) {
    m(static_cast<Eigen::Index>(a0 + d * as), static_cast<Eigen::Index>(b0 + d * bs)) += v;
  }
};

// [P, |k><0|_0] for a piece in which site 0 carries the |k'><r| factor.
TwoSite commutator_site0_first(const CouplingTensor& h, std::size_t k) {
  const std::size_t d = h.local_dim();
  TwoSite t(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t m = 0; m < d; ++m) t.add(a, 0, l, m, h(a, l, k, m));
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t m = 0; m < d; ++m) t.add(k, r, l, m, -h(0, l, r, m));
  return t;
}

// [P, |k><0|_0] for a piece in which site 0 carries the |l><m| factor.
TwoSite commutator_site0_second(const CouplingTensor& h, std::size_t k) {
  const std::size_t d = h.local_dim();
  TwoSite t(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t r = 0; r < d; ++r) t.add(l, 0, a, r, h(a, l, r, k));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t m = 0; m < d; ++m) t.add(k, m, a, r, -h(a, 0, r, m));
  return t;
}

std::vector<double> diagonal_probabilities(const Matrix& rho) {
  std::vector<double> p(static_cast<std::size_t>(rho.rows()));
  for (Eigen::Index i = 0; i < rho.rows(); ++i) p[static_cast<std::size_t>(i)] = rho(i, i).real();
  return p;
}

}  // namespace

Matrix matrix_unit(std::size_t d, std::size_t a, std::size_t b) {
  if (a >= d || b >= d) throw std::out_of_range("matrix_unit index out of range");
  Matrix e = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  e(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1.0;
  return e;
}

Matrix site_operator(const ToyChainSpec& spec, const Matrix& local, std::size_t site) {
  const auto dims = site_dims(spec);
  const std::array<std::size_t, 1> where{site};
  return embed_local(local, dims, where);
}

Matrix build_hamiltonian(const ToyChainSpec& spec) {
  spec.validate();
  const auto dim = static_cast<Eigen::Index>(spec.dimension());
  Matrix h = Matrix::Zero(dim, dim);

  Matrix level = Matrix::Zero(static_cast<Eigen::Index>(spec.d), static_cast<Eigen::Index>(spec.d));
  for (std::size_t k = 0; k < spec.d; ++k) level(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = double(k);
  const Matrix pair = spec.coupling.pair_operator();

  for (std::size_t n = 0; n < spec.sites; ++n) {
    h += site_operator(spec, level, n);
    h += two_site(spec, pair, n, right_of(spec, n));
    h += two_site(spec, pair, n, left_of(spec, n));
  }
  return h;
}

LocalDerivative local_derivative(const ToyChainSpec& spec, std::size_t k) {
  spec.validate();
  if (k >= spec.d) throw std::out_of_range("local_derivative: level index out of range");
  const cplx i{0.0, 1.0};
  const Matrix hn = build_hamiltonian(spec);
  const Matrix x = site_operator(spec, matrix_unit(spec.d, k, 0), 0);

  LocalDerivative out;
  out.commutator = i * commutator(hn, x);
  out.diagonal_term = i * static_cast<double>(k) * x;

  const std::size_t right = right_of(spec, 0);
  const std::size_t left = left_of(spec, 0);
  const auto first = commutator_site0_first(spec.coupling, k);
  const auto second = commutator_site0_second(spec.coupling, k);
  // Right bond: P_(0,1) from n = 0 and P_(1,0) from the mirrored term at n = 1.
  out.right_term = i * (two_site(spec, first.m, 0, right) + two_site(spec, second.m, 0, right));
  // Left bond: P_(0,N-1) from the mirrored term at n = 0 and P_(N-1,0) from n = N-1.
  out.left_term = i * (two_site(spec, first.m, 0, left) + two_site(spec, second.m, 0, left));
  out.residual = max_abs(out.commutator - out.diagonal_term - out.left_term - out.right_term);

  const std::size_t d = spec.d;
  TwoSite printed_left(d), printed_right(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t m = 0; m < d; ++m) {
        printed_left.add(r, 0, l, m, spec.coupling(r, l, k, m));
        printed_right.add(k, r, l, m, -spec.coupling(0, l, r, m));
      }
  out.printed_left_term = i * two_site(spec, printed_left.m, 0, left);
  out.printed_right_term = i * two_site(spec, printed_right.m, 0, right);
  out.printed_residual =
      max_abs(out.commutator - out.diagonal_term - out.printed_left_term - out.printed_right_term);
  return out;
}

CouplingCondition coupling_condition(const CouplingTensor& coupling, double alpha) {
  if (alpha > 0.0) throw std::invalid_argument("coupling_condition: alpha must be <= 0");
  CouplingCondition out;
  out.shift_norm = coupling.shift_norm();
  for (std::size_t k = 0; k < coupling.local_dim(); ++k) {
    const double s = coupling.growth_norm(k);
    out.growth.push_back(s);
    const double scale = std::pow(static_cast<double>(std::max<std::size_t>(k, 1)), alpha);
    out.c_star = std::max(out.c_star, s / scale);
  }
  return out;
}

BoundConstants bound_constants(const CouplingTensor& h) {
  const std::size_t d = h.local_dim();
  const auto di = static_cast<Eigen::Index>(d);
  BoundConstants out;

  Matrix y_first = Matrix::Zero(di, di), y_second = Matrix::Zero(di, di);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      y_first(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = h(0, a, 0, b);
      y_second(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = h(a, 0, b, 0);
    }
  // Two pieces of each kind touch site 0 (one per neighbouring bond).
  out.shift = 2.0 * operator_norm(y_first) + 2.0 * operator_norm(y_second);

  for (std::size_t k = 0; k < d; ++k) {
    Matrix m_first = Matrix::Zero(di, di * di), m_second = Matrix::Zero(di, di * di);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t m = 0; m < d; ++m) {
          m_first(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(r + d * m)) = h(k, a, r, m);
          m_second(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(r + d * m)) = h(a, k, r, m);
        }
    out.h.push_back(2.0 * operator_norm(m_first) + 2.0 * operator_norm(m_second));
  }
  return out;
}

OccupationProfile occupation_profile(const ToyChainSpec& spec, const Matrix& rho) {
  const auto p = diagonal_probabilities(rho);
  OccupationProfile out;
  out.occupation_by_site.assign(spec.sites, std::vector<double>(spec.d, 0.0));
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    std::size_t rest = idx;
    for (std::size_t n = 0; n < spec.sites; ++n) {
      out.occupation_by_site[n][rest % spec.d] += p[idx];
      rest /= spec.d;
    }
  }
  out.occupation.assign(spec.d, 0.0);
  for (const auto& site : out.occupation_by_site)
    for (std::size_t k = 0; k < spec.d; ++k) out.occupation[k] += site[k] / static_cast<double>(spec.sites);
  for (const auto& site : out.occupation_by_site)
    for (std::size_t k = 0; k < spec.d; ++k)
      out.translation_defect = std::max(out.translation_defect, std::abs(site[k] - out.occupation_by_site[0][k]));
  out.tail.assign(spec.d, 0.0);
  for (std::size_t kk = 0; kk < spec.d; ++kk)
    for (std::size_t k = kk + 1; k < spec.d; ++k) out.tail[kk] += out.occupation[k];
  return out;
}

OccupationProfile occupation_profile(const ToyChainSpec& spec) {
  const auto ens = fock::gibbs_state(build_hamiltonian(spec), spec.beta);
  return occupation_profile(spec, ens.rho);
}

std::vector<OccupationBoundRow> occupation_vs_bound(const ToyChainSpec& spec) {
  const auto ens = fock::gibbs_state(build_hamiltonian(spec), spec.beta);
  const auto profile = occupation_profile(spec, ens.rho);
  const auto constants = bound_constants(spec.coupling);
  std::vector<OccupationBoundRow> rows;
  for (std::size_t k = 0; k < spec.d; ++k) {
    OccupationBoundRow row;
    row.k = k;
    row.occupation = profile.occupation_by_site[0][k];
    const double lambda = spec.beta * static_cast<double>(k);
    const double shift = spec.beta * constants.shift;
    row.has_bound = lambda - shift > 0.0;
    if (row.has_bound) {
      row.query = decay::decay_query(lambda, spec.beta * constants.h[k], shift);
      row.holds = row.query.vacuous || row.occupation <= row.query.w_bound;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<kms::KmsGapReport> chain_kms_gaps(const ToyChainSpec& spec) {
  const auto ens = fock::gibbs_state(build_hamiltonian(spec), spec.beta);
  std::vector<kms::KmsGapReport> out;
  for (std::size_t k = 0; k < spec.d; ++k)
    out.push_back(kms::kms_gap(ens, site_operator(spec, matrix_unit(spec.d, 0, k), 0)));
  return out;
}

double truncation_drift(const ToyChainSpec& spec) {
  ToyChainSpec bigger = spec;
  bigger.d = spec.d + 1;
  bigger.coupling = spec.coupling.padded(spec.d + 1);
  const auto small = occupation_profile(spec);
  const auto large = occupation_profile(bigger);
  double drift = 0.0;
  for (std::size_t k = 0; k < spec.d; ++k) drift = std::max(drift, std::abs(small.occupation[k] - large.occupation[k]));
  return drift;
}

EntropyReport local_entropy_report(const ToyChainSpec& spec, std::span<const std::size_t> window_sizes) {
  const auto ens = fock::gibbs_state(build_hamiltonian(spec), spec.beta);
  const auto dims = site_dims(spec);
  auto window_entropy = [&](std::size_t start, std::size_t size) {
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < size; ++j) keep.push_back((start + j) % spec.sites);
    return von_neumann_entropy(partial_trace_qudits(ens.rho, dims, keep));
  };

  EntropyReport report;
  for (auto w : window_sizes) {
    if (w < 1 || w > spec.sites) throw std::invalid_argument("local_entropy_report: window size out of range");
    report.windows.push_back({w, window_entropy(0, w)});
  }
  for (auto a : window_sizes)
    for (auto b : window_sizes) {
      if (a + b > spec.sites) continue;
      SubadditivityCheck c;
      c.left = a;
      c.right = b;
      c.joint = window_entropy(0, a + b);
      c.left_entropy = window_entropy(0, a);
      c.right_entropy = window_entropy(a, b);
      c.holds = c.joint <= c.left_entropy + c.right_entropy + 1e-9;
      report.subadditivity.push_back(c);
    }
  return report;
}

}  // namespace kmslab::chain
