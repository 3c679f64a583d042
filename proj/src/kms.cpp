#include "kmslab/kms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kmslab::kms {

using fock::FockOperator;

FockOperator derivation(const FockOperator& hamiltonian, double mu, const FockOperator& a) {
  if (hamiltonian.mode_count() != a.mode_count()) throw std::invalid_argument("derivation: dimension mismatch");
  const Matrix k = hamiltonian.matrix() + mu * fock::number_operator(hamiltonian.mode_count()).matrix();
  return {a.mode_count(), derivation(k, a.matrix())};
}

Matrix derivation(const Matrix& generator, const Matrix& a) {
  if (generator.rows() != a.rows() || generator.cols() != a.cols())
    throw std::invalid_argument("derivation: dimension mismatch");
  return cplx{0.0, 1.0} * commutator(generator, a);
}

KmsGapReport kms_gap(const Matrix& rho, const Matrix& generator, double beta, const Matrix& a) {
  if (std::isinf(beta)) throw std::invalid_argument("kms_gap: beta = infinity (ground state) is not covered");
  if (!(beta >= 0.0)) throw std::invalid_argument("kms_gap: beta must be >= 0");
  if (rho.rows() != a.rows() || generator.rows() != a.rows()) throw std::invalid_argument("kms_gap: dimension mismatch");
  const double norm = operator_norm(a);
  if (norm == 0.0) throw std::invalid_argument("kms_gap: A must be nonzero");

  const Matrix an = a / norm;
  const Matrix ad = an.adjoint();
  const Matrix delta_a = derivation(generator, an);
  const Matrix delta_ad = derivation(generator, ad);
  const cplx i{0.0, 1.0};

  KmsGapReport r;
  r.lhs = (-i * beta * fock::expectation(rho, ad * delta_a)).real();
  r.lhs_symmetric = (i * beta * fock::expectation(rho, delta_ad * an)).real();
  const double scale = 1.0 + beta * operator_norm(generator);
  if (std::abs(r.lhs - r.lhs_symmetric) > 1e-9 * scale)
    throw std::logic_error("kms_gap: the two forms of the left-hand side disagree");

  r.u = std::max(0.0, fock::expectation(rho, ad * an).real());
  r.v = std::max(0.0, fock::expectation(rho, an * ad).real());
  if (r.u < kBoundaryClamp) {
    r.convention_case = ConventionCase::u_zero;
    r.rhs = 0.0;
    r.gap = r.lhs;
  } else if (r.v < kBoundaryClamp) {
    r.convention_case = ConventionCase::v_zero_u_positive;
    r.rhs = std::numeric_limits<double>::infinity();
    r.gap = -std::numeric_limits<double>::infinity();
  } else {
    r.rhs = r.u * std::log(r.u / r.v);
    r.gap = r.lhs - r.rhs;
  }
  return r;
}

KmsGapReport kms_gap(const fock::GibbsEnsemble& ens, const Matrix& a) {
  return kms_gap(ens.rho, ens.generator, ens.beta, a);
}

std::optional<std::size_t> kms_violation_witness(const Matrix& rho, const FockOperator& hamiltonian, double beta,
                                                 double mu, std::span<const FockOperator> candidates, double tol) {
  const Matrix k = hamiltonian.matrix() + mu * fock::number_operator(hamiltonian.mode_count()).matrix();
  for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
    if (operator_norm(candidates[idx].matrix()) == 0.0) continue;
    if (!kms_gap(rho, k, beta, candidates[idx].matrix()).satisfied(tol)) return idx;
  }
  return std::nullopt;
}

double fermi_function(double x) {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

FermiDiracSandwich fermi_dirac_sandwich(double p0, double mu, double b) {
  if (!(b >= 0.0)) throw std::invalid_argument("fermi_dirac_sandwich: b must be >= 0");
  const double e = p0 * p0 + mu;
  return {p0, mu, b, fermi_function(e + b), fermi_function(e - b)};
}

SandwichLimit sandwich_limit_check(double p0, double mu, std::span<const double> b_sequence) {
  SandwichLimit out;
  out.limit = fermi_function(p0 * p0 + mu);
  double prev_b = std::numeric_limits<double>::infinity();
  double prev_width = std::numeric_limits<double>::infinity();
  for (double b : b_sequence) {
    if (!(b >= 0.0)) throw std::invalid_argument("sandwich_limit_check: b must be >= 0");
    if (b > prev_b) throw std::invalid_argument("sandwich_limit_check: b sequence is not nonincreasing");
    const auto s = fermi_dirac_sandwich(p0, mu, b);
    if (s.width() > prev_width) throw std::logic_error("sandwich_limit_check: widths are not monotone");
    out.widths.push_back(s.width());
    out.final_distance = std::max(std::abs(s.w_lower - out.limit), std::abs(s.w_upper - out.limit));
    prev_b = b;
    prev_width = s.width();
  }
  return out;
}

}  // namespace kmslab::kms
