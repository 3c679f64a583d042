#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kmslab/linalg.hpp"

namespace kmslab::fock {

/// Largest supported mode count (4096-dimensional Fock space).
inline constexpr std::size_t kMaxModes = 12;

/// One-particle mode amplitudes f_j of a smeared field operator.
struct ModeVector {
  Vector coefficients;

  std::size_t size() const { return static_cast<std::size_t>(coefficients.size()); }
  double norm() const { return coefficients.norm(); }

  static ModeVector unit(std::size_t j, std::size_t modes);
};

/// Operator on the 2^M dimensional fermionic Fock space of M modes.
///
/// Basis states are labelled by occupation bit strings; bit j of the index is
/// the occupation of mode j, and |n> = (a_{i1})^* (a_{i2})^* ... |0> with
/// i1 < i2 < ... ascending.
class FockOperator {
 public:
  FockOperator(std::size_t modes, Matrix matrix);

  static FockOperator identity(std::size_t modes);
  static FockOperator zero(std::size_t modes);

  std::size_t mode_count() const { return modes_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

  FockOperator adjoint() const { return {modes_, matrix_.adjoint()}; }

  FockOperator& operator+=(const FockOperator& o);
  FockOperator& operator-=(const FockOperator& o);
  FockOperator& operator*=(cplx s);

  friend FockOperator operator+(FockOperator a, const FockOperator& b) { return a += b; }
  friend FockOperator operator-(FockOperator a, const FockOperator& b) { return a -= b; }
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(cplx s, FockOperator a) { return a *= s; }
  friend FockOperator operator*(FockOperator a, cplx s) { return a *= s; }

 private:
  std::size_t modes_;
  Matrix matrix_;
};

FockOperator commutator(const FockOperator& a, const FockOperator& b);
FockOperator anticommutator(const FockOperator& a, const FockOperator& b);

std::size_t fock_dimension(std::size_t modes);

/// a_j via the ordered-string construction: a sign (-1)^(occupied modes < j)
/// times the lowering map at mode j.
FockOperator annihilator(std::size_t j, std::size_t modes);
FockOperator creator(std::size_t j, std::size_t modes);

/// a(f) = sum_j f_j a_j. Linear in f (many texts use the antilinear
/// convention instead); a^*(f) = a(f)^dagger is then antilinear.
FockOperator smeared_annihilator(const ModeVector& f);
FockOperator smeared_creator(const ModeVector& f);

/// N = sum_j a_j^* a_j, diagonal with the popcount of the basis index.
FockOperator number_operator(std::size_t modes);

/// Unitary relabelling of modes: new mode k is old mode order[k]. Carries the
/// fermionic reordering sign so that U a_{order[k]} U^dagger = a_k.
Matrix mode_permutation(std::size_t modes, std::span<const std::size_t> order);

/// Thermal ensemble rho = exp(-beta K) / Tr exp(-beta K) for generator K.
struct GibbsEnsemble {
  Matrix hamiltonian;
  double beta = 0.0;
  double mu = 0.0;
  /// Generator of the dynamics: hamiltonian + mu N (or hamiltonian alone when
  /// no number operator is attached).
  Matrix generator;
  Matrix rho;
  /// Mode count when the ensemble lives on a Fock space, 0 otherwise.
  std::size_t mode_count = 0;
};

/// Gibbs state of H + mu N. Computed through the eigendecomposition of the
/// generator with the ground energy subtracted, so large beta stays finite.
GibbsEnsemble gibbs_state(const FockOperator& hamiltonian, double beta, double mu);

/// Gibbs state of an arbitrary Hermitian generator (no number operator).
GibbsEnsemble gibbs_state(const Matrix& generator, double beta);

/// Tr(rho A).
cplx expectation(const Matrix& rho, const Matrix& a);
inline cplx expectation(const Matrix& rho, const FockOperator& a) { return expectation(rho, a.matrix()); }

/// Reduced density matrix on `kept` modes; the output register orders the kept
/// modes as listed. Fermionic: expectations of any operator built from the kept
/// a_j are preserved.
FockOperator partial_trace(const FockOperator& rho, std::span<const std::size_t> kept);

/// Hermiticity tolerance used by the module: 1e-10 relative to max(1, max|H_ij|).
bool is_hermitian(const Matrix& h);

}  // namespace kmslab::fock
