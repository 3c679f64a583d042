#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "kmslab/linalg.hpp"

namespace kmslab::quad {

/// Raised when an adaptive rule cannot reach the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested absolute error of every adaptive integral.
inline constexpr double kAbsTolerance = 1e-10;
/// Error estimates above this fraction of |value| are treated as divergence.
inline constexpr double kFailureFraction = 1e-4;

struct Result {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15/31 points) on [a, b] to relative tolerance
/// `rel_tol`; either end may be infinite.
/// Throws NumericalError when the final estimate exceeds
/// max(kAbsTolerance, kFailureFraction |value|).
Result integrate(const std::function<double(double)>& f, double a, double b, unsigned max_depth = 15,
                 double rel_tol = 1e-12);

double integral(const std::function<double(double)>& f, double a, double b);
cplx integral(const std::function<cplx(double)>& f, double a, double b);

/// Same rule applied on consecutive panels [breaks_i, breaks_{i+1}].
double integral(const std::function<double(double)>& f, const std::vector<double>& breaks);

// Lambdas convert to both std::function types; pick by return type.
template <class F>
  requires(std::is_same_v<std::invoke_result_t<F&, double>, double> &&
           !std::is_same_v<std::remove_cvref_t<F>, std::function<double(double)>>)
double integral(F&& f, double a, double b) {
  return integral(std::function<double(double)>(std::forward<F>(f)), a, b);
}

template <class F>
  requires(std::is_same_v<std::invoke_result_t<F&, double>, cplx> &&
           !std::is_same_v<std::remove_cvref_t<F>, std::function<cplx(double)>>)
cplx integral(F&& f, double a, double b) {
  return integral(std::function<cplx(double)>(std::forward<F>(f)), a, b);
}

/// Gauss-Legendre rule with n nodes mapped to [a, b] (Golub-Welsch).
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  auto apply(F&& f) const {
    decltype(f(0.0)) s{};
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

Rule gauss_legendre(std::size_t n, double a, double b);

/// Composite rule: `panels` equal panels of `n` Gauss-Legendre nodes each.
Rule composite_gauss_legendre(std::size_t panels, std::size_t n, double a, double b);

/// Exponent -x^T A x + b^T x + c of a multivariate complex Gaussian.
struct QuadraticExponent {
  explicit QuadraticExponent(Eigen::Index n);

  Eigen::Index dim() const { return a.rows(); }

  /// -w (x_i - center)^2
  void add_square(Eigen::Index i, double center, double w);
  /// -w (x_i - x_j - shift)^2
  void add_difference_square(Eigen::Index i, Eigen::Index j, double shift, double w);
  /// coeff x_i x_j (i may equal j)
  void add_product(Eigen::Index i, Eigen::Index j, cplx coeff);
  void add_linear(Eigen::Index i, cplx coeff);
  void add_constant(cplx coeff) { c += coeff; }

  Matrix a;
  Vector b;
  cplx c{0.0, 0.0};
};

/// Integral of exp(-x^T A x + b^T x + c) over R^n for complex symmetric A with
/// positive definite real part: sqrt(pi^n / det A) exp(b^T A^{-1} b / 4 + c).
/// The square root follows the branch continuous from Re A.
cplx gaussian_integral(const QuadraticExponent& e);

/// Gaussian integrals sharing one matrix A, for many (b, c).
class GaussianFamily {
 public:
  explicit GaussianFamily(const Matrix& a);

  cplx integral(const Vector& b, cplx c) const;
  const Matrix& inverse() const { return inverse_; }
  /// sqrt(pi^n / det A).
  cplx prefactor() const { return prefactor_; }

 private:
  Matrix inverse_;
  cplx prefactor_;
};

}  // namespace kmslab::quad
