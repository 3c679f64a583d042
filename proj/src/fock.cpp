#include "kmslab/fock.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kmslab::fock {

namespace {

void check_modes(std::size_t modes) {
  if (modes < 1 || modes > kMaxModes)
    throw std::invalid_argument("mode count must lie in [1, " + std::to_string(kMaxModes) + "]");
}

void check_same_space(const FockOperator& a, const FockOperator& b) {
  if (a.mode_count() != b.mode_count()) throw std::invalid_argument("Fock operators act on different mode counts");
}

}  // namespace

ModeVector ModeVector::unit(std::size_t j, std::size_t modes) {
  if (j >= modes) throw std::out_of_range("mode index out of range");
  ModeVector f{Vector::Zero(static_cast<Eigen::Index>(modes))};
  f.coefficients(static_cast<Eigen::Index>(j)) = 1.0;
  return f;
}

std::size_t fock_dimension(std::size_t modes) { return std::size_t{1} << modes; }

FockOperator::FockOperator(std::size_t modes, Matrix matrix) : modes_(modes), matrix_(std::move(matrix)) {
  check_modes(modes);
  const auto d = static_cast<Eigen::Index>(fock_dimension(modes));
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw std::invalid_argument("Fock operator matrix must be 2^M x 2^M");
}

FockOperator FockOperator::identity(std::size_t modes) {
  check_modes(modes);
  const auto d = static_cast<Eigen::Index>(fock_dimension(modes));
  return {modes, Matrix::Identity(d, d)};
}

FockOperator FockOperator::zero(std::size_t modes) {
  check_modes(modes);
  const auto d = static_cast<Eigen::Index>(fock_dimension(modes));
  return {modes, Matrix::Zero(d, d)};
}

FockOperator& FockOperator::operator+=(const FockOperator& o) {
  check_same_space(*this, o);
  matrix_ += o.matrix_;
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& o) {
  check_same_space(*this, o);
  matrix_ -= o.matrix_;
  return *this;
}

FockOperator& FockOperator::operator*=(cplx s) {
  matrix_ *= s;
  return *this;
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  check_same_space(a, b);
  return {a.modes_, a.matrix_ * b.matrix_};
}

FockOperator commutator(const FockOperator& a, const FockOperator& b) { return a * b - b * a; }
FockOperator anticommutator(const FockOperator& a, const FockOperator& b) { return a * b + b * a; }

FockOperator annihilator(std::size_t j, std::size_t modes) {
  check_modes(modes);
  if (j >= modes) throw std::out_of_range("annihilator: mode index out of range");
  const std::size_t dim = fock_dimension(modes);
  const std::size_t bit = std::size_t{1} << j;
  const std::size_t below = bit - 1;
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t n = 0; n < dim; ++n) {
    if ((n & bit) == 0) continue;
    const double sign = (std::popcount(n & below) % 2 == 0) ? 1.0 : -1.0;
    m(static_cast<Eigen::Index>(n ^ bit), static_cast<Eigen::Index>(n)) = sign;
  }
  return {modes, std::move(m)};
}

FockOperator creator(std::size_t j, std::size_t modes) { return annihilator(j, modes).adjoint(); }

FockOperator smeared_annihilator(const ModeVector& f) {
  const std::size_t modes = f.size();
  check_modes(modes);
  FockOperator out = FockOperator::zero(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    const cplx c = f.coefficients(static_cast<Eigen::Index>(j));
    if (c != cplx{}) out += c * annihilator(j, modes);
  }
  return out;
}

FockOperator smeared_creator(const ModeVector& f) { return smeared_annihilator(f).adjoint(); }

FockOperator number_operator(std::size_t modes) {
  check_modes(modes);
  const std::size_t dim = fock_dimension(modes);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t n = 0; n < dim; ++n)
    m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = static_cast<double>(std::popcount(n));
  return {modes, std::move(m)};
}

Matrix mode_permutation(std::size_t modes, std::span<const std::size_t> order) {
  check_modes(modes);
  if (order.size() != modes) throw std::invalid_argument("mode_permutation: order must list every mode once");
  std::vector<std::size_t> new_label(modes, modes);
  for (std::size_t k = 0; k < modes; ++k) {
    if (order[k] >= modes || new_label[order[k]] != modes)
      throw std::invalid_argument("mode_permutation: order is not a permutation");
    new_label[order[k]] = k;
  }
  const std::size_t dim = fock_dimension(modes);
  Matrix u = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<std::size_t> occupied;
  for (std::size_t n = 0; n < dim; ++n) {
    occupied.clear();
    std::size_t target = 0;
    for (std::size_t i = 0; i < modes; ++i)
      if (n >> i & 1U) {
        occupied.push_back(new_label[i]);
        target |= std::size_t{1} << new_label[i];
      }
    // Sign of the permutation sorting the creators into ascending new labels.
    std::size_t inversions = 0;
    for (std::size_t a = 0; a < occupied.size(); ++a)
      for (std::size_t b = a + 1; b < occupied.size(); ++b)
        if (occupied[a] > occupied[b]) ++inversions;
    u(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(n)) = (inversions % 2 == 0) ? 1.0 : -1.0;
  }
  return u;
}

bool is_hermitian(const Matrix& h) {
  if (h.rows() != h.cols()) return false;
  return hermiticity_defect(h) <= 1e-10 * std::max(1.0, max_abs(h));
}

GibbsEnsemble gibbs_state(const Matrix& generator, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("gibbs_state: beta must be finite and >= 0");
  if (!is_hermitian(generator)) throw std::invalid_argument("gibbs_state: generator is not Hermitian");
  const Matrix k = 0.5 * (generator + generator.adjoint());
  const auto spec = hermitian_spectrum(k);
  const double e0 = spec.values.minCoeff();
  RealVector w(spec.values.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(-beta * (spec.values(i) - e0));
  w /= w.sum();
  GibbsEnsemble ens;
  ens.hamiltonian = k;
  ens.beta = beta;
  ens.generator = k;
  ens.rho = spec.vectors * w.cast<cplx>().asDiagonal() * spec.vectors.adjoint();
  ens.rho = 0.5 * (ens.rho + ens.rho.adjoint());
  return ens;
}

GibbsEnsemble gibbs_state(const FockOperator& hamiltonian, double beta, double mu) {
  if (!is_hermitian(hamiltonian.matrix())) throw std::invalid_argument("gibbs_state: Hamiltonian is not Hermitian");
  const Matrix h = 0.5 * (hamiltonian.matrix() + hamiltonian.matrix().adjoint());
  const Matrix k = h + mu * number_operator(hamiltonian.mode_count()).matrix();
  GibbsEnsemble ens = gibbs_state(k, beta);
  ens.hamiltonian = h;
  ens.mu = mu;
  ens.mode_count = hamiltonian.mode_count();
  return ens;
}

cplx expectation(const Matrix& rho, const Matrix& a) {
  if (rho.rows() != a.rows() || rho.cols() != a.cols() || rho.rows() != rho.cols())
    throw std::invalid_argument("expectation: dimension mismatch");
  // Tr(rho A) = sum_ij rho_ij A_ji
  return (rho.transpose().cwiseProduct(a)).sum();
}

FockOperator partial_trace(const FockOperator& rho, std::span<const std::size_t> kept) {
  const std::size_t modes = rho.mode_count();
  if (kept.empty() || kept.size() > modes) throw std::invalid_argument("partial_trace: invalid mode subset");
  std::vector<bool> used(modes, false);
  std::vector<std::size_t> order;
  for (auto k : kept) {
    if (k >= modes || used[k]) throw std::invalid_argument("partial_trace: invalid mode subset");
    used[k] = true;
    order.push_back(k);
  }
  for (std::size_t i = 0; i < modes; ++i)
    if (!used[i]) order.push_back(i);

  // After relabelling the kept modes sit first, so their Jordan-Wigner strings
  // never touch traced modes and the ordinary tensor partial trace applies.
  const Matrix u = mode_permutation(modes, order);
  const Matrix moved = u * rho.matrix() * u.adjoint();
  std::vector<std::size_t> dims(modes, 2);
  std::vector<std::size_t> keep(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) keep[k] = k;
  return {kept.size(), partial_trace_qudits(moved, dims, keep)};
}

}  // namespace kmslab::fock
