#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kmslab/linalg.hpp"

namespace kmslab::qf {

/// One-particle density R with omega(a^*(f) a(g)) = <f|R|g> under the linear
/// a(f) convention. Eigenvalues must lie in [-1e-12, 1 + 1e-12].
class QuasifreeSymbol {
 public:
  explicit QuasifreeSymbol(Matrix r);

  const Matrix& matrix() const { return r_; }
  std::size_t modes() const { return static_cast<std::size_t>(r_.rows()); }
  /// Occupations rho_n, descending, clamped into [0, 1].
  const std::vector<double>& occupations() const { return occupations_; }
  /// Column n is the eigenmode f_n belonging to occupations()[n].
  const Matrix& modes_basis() const { return basis_; }

 private:
  Matrix r_;
  std::vector<double> occupations_;
  Matrix basis_;
};

/// prod_n (rho_n P_n + (1 - rho_n)(1 - P_n)) with P_n = a^*(f_n) a(f_n).
Matrix quasifree_density_matrix(const QuasifreeSymbol& r);

/// -sum_n (rho_n log rho_n + (1 - rho_n) log(1 - rho_n)), nats.
double binary_entropy_sum(const QuasifreeSymbol& r);

/// Columns: the 2^M joint eigenvectors of the occupations P_n of the eigenmodes
/// of R, ordered by the configuration bit string.
Matrix configuration_basis(const QuasifreeSymbol& r);

/// sum over configurations K of P_K rho P_K.
Matrix pinch(const Matrix& rho, const QuasifreeSymbol& r);

struct RelativeEntropy {
  double value = 0.0;
  /// false when rho has weight outside the support of sigma; value is then +inf.
  bool finite = true;
};

RelativeEntropy relative_entropy(const Matrix& rho, const Matrix& sigma);

struct DominanceReport {
  double entropy = 0.0;
  double pinched_entropy = 0.0;
  double relative = 0.0;
  /// |relative - (pinched_entropy - entropy)|.
  double identity_residual = 0.0;
  bool dominated = false;
};

DominanceReport entropy_dominance_check(const Matrix& rho, const QuasifreeSymbol& r);

struct TraceClassCertificate {
  double c = 0.0;
  double epsilon = 0.0;
  bool pass = false;
  /// 1-based. First n with rho_n >= c n^{-(1+epsilon)} on failure, else the n
  /// closest to the envelope.
  std::size_t worst_n = 0;
  /// binary_entropy_sum when pass.
  std::optional<double> entropy_bound;
};

TraceClassCertificate trace_class_certificate(const QuasifreeSymbol& r, double c, double epsilon);

/// max_n rho_n n^{1+epsilon}: every c above it passes.
double smallest_certificate_constant(const QuasifreeSymbol& r, double epsilon);

std::string certificate_json(const TraceClassCertificate& cert);

/// R = diag(1/(1 + e^{beta(eps_k + mu)})).
QuasifreeSymbol fermi_dirac_symbol(std::span<const double> dispersion, double beta, double mu);

/// Row-major text: one line per row, real and imaginary part of every entry.
void write_symbol(std::ostream& os, const Matrix& r);
Matrix read_symbol(std::istream& is);

}  // namespace kmslab::qf
