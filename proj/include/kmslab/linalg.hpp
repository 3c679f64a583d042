#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace kmslab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Spectral data of a Hermitian matrix, eigenvalues ascending.
struct HermitianSpectrum {
  RealVector values;
  Matrix vectors;
};

HermitianSpectrum hermitian_spectrum(const Matrix& a);

/// max |A - A^dagger| entrywise.
double hermiticity_defect(const Matrix& a);

/// Largest singular value.
double operator_norm(const Matrix& a);
double smallest_singular_value(const Matrix& a);

double max_abs(const Matrix& a);

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }
inline Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

/// Applies a real function to the eigenvalues of a Hermitian matrix.
template <class F>
Matrix hermitian_function(const Matrix& a, F&& f) {
  const auto spec = hermitian_spectrum(a);
  Vector fv(spec.values.size());
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) fv(i) = f(spec.values(i));
  return spec.vectors * fv.asDiagonal() * spec.vectors.adjoint();
}

/// -sum p log p over a probability vector, with 0 log 0 = 0 (nats).
double shannon_entropy(std::span<const double> probabilities);

/// Von Neumann entropy -Tr rho log rho in nats. Eigenvalues are clamped to
/// [1e-300, 1] before the logarithm.
double von_neumann_entropy(const Matrix& rho);

/// Partial trace on a register of qudits. Basis index = sum_i s_i * stride_i with
/// stride_0 = 1 (qudit 0 is least significant). `keep` lists qudit indices in the
/// order they appear in the output register.
Matrix partial_trace_qudits(const Matrix& rho, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Embeds a local operator on the listed qudits into the full register.
/// `local` acts on the qudits in `sites` order (sites[0] least significant).
Matrix embed_local(const Matrix& local, std::span<const std::size_t> dims,
                   std::span<const std::size_t> sites);

/// Kronecker product, with `b` the less significant factor.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace kmslab
