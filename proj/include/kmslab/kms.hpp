#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kmslab/fock.hpp"

namespace kmslab::kms {

/// Default tolerance on the KMS gap for normalized operators (||A|| = 1).
inline constexpr double kGapTolerance = 1e-8;

/// u or v below this are treated as exact zeros (boundary conventions of the
/// u log(u/v) term).
inline constexpr double kBoundaryClamp = 1e-14;

enum class ConventionCase { regular, u_zero, v_zero_u_positive };

/// Both sides of the entropy inequality
///   -i beta w(A^* delta(A)) >= u log(u/v),  u = w(A^* A), v = w(A A^*),
/// evaluated for the normalized operator A / ||A||.
struct KmsGapReport {
  double lhs = 0.0;
  /// i beta w(delta(A^*) A); equal to lhs for any state.
  double lhs_symmetric = 0.0;
  double u = 0.0;
  double v = 0.0;
  /// +infinity in the v_zero_u_positive case.
  double rhs = 0.0;
  /// lhs - rhs; -infinity in the v_zero_u_positive case.
  double gap = 0.0;
  ConventionCase convention_case = ConventionCase::regular;

  /// The v = 0 < u case: the right-hand side is infinite and the inequality fails.
  bool violation_flag() const { return convention_case == ConventionCase::v_zero_u_positive; }
  bool satisfied(double tol = kGapTolerance) const { return !violation_flag() && gap >= -tol; }
};

/// delta(A) = i [K, A] with K = H + mu N (the generator of the dynamics
/// composed with the gauge rotation).
fock::FockOperator derivation(const fock::FockOperator& hamiltonian, double mu, const fock::FockOperator& a);

/// Same with an explicit generator matrix.
Matrix derivation(const Matrix& generator, const Matrix& a);

/// Evaluates the inequality for state `rho`, dynamics generated by `generator`
/// and inverse temperature `beta`. Throws for beta = infinity (ground states are
/// outside the characterization) or A = 0.
KmsGapReport kms_gap(const Matrix& rho, const Matrix& generator, double beta, const Matrix& a);

KmsGapReport kms_gap(const fock::GibbsEnsemble& ens, const Matrix& a);
inline KmsGapReport kms_gap(const fock::GibbsEnsemble& ens, const fock::FockOperator& a) {
  return kms_gap(ens, a.matrix());
}

/// Index of the first candidate violating the inequality by more than `tol`
/// (or with the infinite right-hand side), for the dynamics H + mu N at beta.
std::optional<std::size_t> kms_violation_witness(const Matrix& rho, const fock::FockOperator& hamiltonian,
                                                 double beta, double mu,
                                                 std::span<const fock::FockOperator> candidates,
                                                 double tol = kGapTolerance);

/// Occupation window for a mode whose derivation is p0^2 + mu times the mode
/// plus a perturbation of norm at most b:
///   p0^2 + mu - b <= log((1 - w)/w) <= p0^2 + mu + b.
struct FermiDiracSandwich {
  double p0 = 0.0;
  double mu = 0.0;
  double b = 0.0;
  double w_lower = 0.0;
  double w_upper = 0.0;

  double width() const { return w_upper - w_lower; }
};

FermiDiracSandwich fermi_dirac_sandwich(double p0, double mu, double b);

/// 1 / (1 + exp(x)) without overflow.
double fermi_function(double x);

struct SandwichLimit {
  /// 1 / (1 + exp(p0^2 + mu)).
  double limit = 0.0;
  std::vector<double> widths;
  /// max(|w_lower - limit|, |w_upper - limit|) at the last b.
  double final_distance = 0.0;
};

/// Evaluates the sandwich along a nonincreasing sequence b_n >= 0 and checks the
/// widths shrink monotonically. Throws std::invalid_argument for an increasing
/// step or a negative entry.
SandwichLimit sandwich_limit_check(double p0, double mu, std::span<const double> b_sequence);

}  // namespace kmslab::kms
