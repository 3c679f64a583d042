#include "kmslab/quasifree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "kmslab/csv.hpp"
#include "kmslab/fock.hpp"

namespace kmslab::qf {

namespace {

constexpr double kSymbolTolerance = 1e-12;
// Eigenvalues of sigma below this count as outside its support.
constexpr double kSupportFloor = 1e-13;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

std::vector<fock::FockOperator> mode_occupations(const QuasifreeSymbol& r) {
  std::vector<fock::FockOperator> out;
  for (Eigen::Index n = 0; n < static_cast<Eigen::Index>(r.modes()); ++n) {
    const fock::ModeVector f{r.modes_basis().col(n)};
    out.push_back(fock::smeared_creator(f) * fock::smeared_annihilator(f));
  }
  return out;
}

}  // namespace

QuasifreeSymbol::QuasifreeSymbol(Matrix r) : r_(std::move(r)) {
  if (r_.rows() == 0 || r_.rows() != r_.cols()) throw std::invalid_argument("symbol must be a nonempty square matrix");
  if (hermiticity_defect(r_) > kSymbolTolerance) throw std::invalid_argument("symbol is not Hermitian");
  const auto spec = hermitian_spectrum(0.5 * (r_ + r_.adjoint()));
  const auto m = spec.values.size();
  if (spec.values(0) < -kSymbolTolerance || spec.values(m - 1) > 1.0 + kSymbolTolerance)
    throw std::invalid_argument("symbol eigenvalues must lie in [0, 1]");
  basis_.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    occupations_.push_back(std::clamp(spec.values(m - 1 - i), 0.0, 1.0));
    basis_.col(i) = spec.vectors.col(m - 1 - i);
  }
}

Matrix quasifree_density_matrix(const QuasifreeSymbol& r) {
  if (r.modes() > fock::kMaxModes) throw std::invalid_argument("quasifree_density_matrix: too many modes");
  const auto occ = mode_occupations(r);
  const auto dim = static_cast<Eigen::Index>(fock::fock_dimension(r.modes()));
  const Matrix id = Matrix::Identity(dim, dim);
  Matrix rho = id;
  for (std::size_t n = 0; n < occ.size(); ++n) {
    const double p = r.occupations()[n];
    rho = rho * (p * occ[n].matrix() + (1.0 - p) * (id - occ[n].matrix()));
  }
  return 0.5 * (rho + rho.adjoint());
}

double binary_entropy_sum(const QuasifreeSymbol& r) {
  double s = 0.0;
  for (double p : r.occupations()) s -= xlogx(p) + xlogx(1.0 - p);
  return s;
}

Matrix configuration_basis(const QuasifreeSymbol& r) {
  if (r.modes() > fock::kMaxModes) throw std::invalid_argument("configuration_basis: too many modes");
  const auto occ = mode_occupations(r);
  const auto dim = static_cast<Eigen::Index>(fock::fock_dimension(r.modes()));
  // Label operator sum_n 2^n P_n: its eigenvalues 0..2^M-1 are simple and its
  // eigenvectors are the configuration states.
  Matrix label = Matrix::Zero(dim, dim);
  for (std::size_t n = 0; n < occ.size(); ++n) label += std::ldexp(1.0, static_cast<int>(n)) * occ[n].matrix();
  return hermitian_spectrum(0.5 * (label + label.adjoint())).vectors;
}

Matrix pinch(const Matrix& rho, const QuasifreeSymbol& r) {
  const Matrix w = configuration_basis(r);
  if (rho.rows() != w.rows() || rho.cols() != w.rows()) throw std::invalid_argument("pinch: dimension mismatch");
  const Matrix local = w.adjoint() * rho * w;
  return w * local.diagonal().asDiagonal() * w.adjoint();
}

RelativeEntropy relative_entropy(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw std::invalid_argument("relative_entropy: dimension mismatch");
  const auto s = hermitian_spectrum(0.5 * (sigma + sigma.adjoint()));
  const Matrix rho_in = s.vectors.adjoint() * rho * s.vectors;
  double cross = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    const double weight = rho_in(i, i).real();
    if (s.values(i) <= kSupportFloor) {
      if (weight > kSupportFloor) return {std::numeric_limits<double>::infinity(), false};
      continue;
    }
    cross += weight * std::log(std::min(s.values(i), 1.0));
  }
  return {-von_neumann_entropy(rho) - cross, true};
}

DominanceReport entropy_dominance_check(const Matrix& rho, const QuasifreeSymbol& r) {
  const Matrix pinched = pinch(rho, r);
  DominanceReport out;
  out.entropy = von_neumann_entropy(rho);
  out.pinched_entropy = von_neumann_entropy(pinched);
  out.relative = relative_entropy(rho, pinched).value;
  out.identity_residual = std::abs(out.relative - (out.pinched_entropy - out.entropy));
  out.dominated = out.entropy <= out.pinched_entropy + 1e-9;
  return out;
}

TraceClassCertificate trace_class_certificate(const QuasifreeSymbol& r, double c, double epsilon) {
  if (!(c > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("certificate: c and epsilon must be positive");
  TraceClassCertificate cert;
  cert.c = c;
  cert.epsilon = epsilon;
  cert.pass = true;
  double worst = -1.0;
  const auto& occ = r.occupations();
  for (std::size_t i = 0; i < occ.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double envelope = c * std::pow(n, -(1.0 + epsilon));
    if (!(occ[i] < envelope)) {
      cert.pass = false;
      cert.worst_n = i + 1;
      return cert;
    }
    if (occ[i] / envelope > worst) {
      worst = occ[i] / envelope;
      cert.worst_n = i + 1;
    }
  }
  cert.entropy_bound = binary_entropy_sum(r);
  return cert;
}

double smallest_certificate_constant(const QuasifreeSymbol& r, double epsilon) {
  double c = 0.0;
  const auto& occ = r.occupations();
  for (std::size_t i = 0; i < occ.size(); ++i)
    c = std::max(c, occ[i] * std::pow(static_cast<double>(i + 1), 1.0 + epsilon));
  return c;
}

std::string certificate_json(const TraceClassCertificate& cert) {
  nlohmann::json j;
  j["c"] = cert.c;
  j["epsilon"] = cert.epsilon;
  j["pass"] = cert.pass;
  j["worst_n"] = cert.worst_n;
  j["entropy_bound"] = cert.entropy_bound ? nlohmann::json(*cert.entropy_bound) : nlohmann::json(nullptr);
  return j.dump(2);
}

QuasifreeSymbol fermi_dirac_symbol(std::span<const double> dispersion, double beta, double mu) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("fermi_dirac_symbol: beta must be finite and >= 0");
  if (dispersion.empty()) throw std::invalid_argument("fermi_dirac_symbol: empty dispersion");
  Matrix r = Matrix::Zero(static_cast<Eigen::Index>(dispersion.size()), static_cast<Eigen::Index>(dispersion.size()));
  for (std::size_t k = 0; k < dispersion.size(); ++k) {
    const double x = beta * (dispersion[k] + mu);
    const double occ = x >= 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
    r(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = occ;
  }
  return QuasifreeSymbol(std::move(r));
}

void write_symbol(std::ostream& os, const Matrix& r) {
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      if (j) os << ' ';
      os << format_double(r(i, j).real()) << ' ' << format_double(r(i, j).imag());
    }
    os << '\n';
  }
}

Matrix read_symbol(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double x;
    while (ls >> x) row.push_back(x);
    if (!ls.eof()) throw std::invalid_argument("symbol file: non-numeric entry");
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const auto m = rows.size();
  if (m == 0) throw std::invalid_argument("symbol file: empty");
  Matrix r(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != 2 * m) throw std::invalid_argument("symbol file: every row needs 2M numbers");
    for (std::size_t j = 0; j < m; ++j)
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = {rows[i][2 * j], rows[i][2 * j + 1]};
  }
  return r;
}

}  // namespace kmslab::qf
