#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/QR>

#include "kmslab/linalg.hpp"

namespace kmslab {

/// Seeded generator whose streams depend only on the 64-bit Mersenne Twister
/// output (no implementation-defined distributions), so runs are reproducible
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  cplx complex_normal() { return {normal(), normal()}; }

  Vector complex_vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  Matrix ginibre(Eigen::Index n) {
    Matrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) m(i, j) = complex_normal();
    return m;
  }

  Matrix hermitian(Eigen::Index n) {
    const Matrix g = ginibre(n);
    return 0.5 * (g + g.adjoint());
  }

  /// Full-rank mixed state G G^dagger / Tr.
  Matrix density_matrix(Eigen::Index n) {
    const Matrix g = ginibre(n);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
  }

  /// Q factor of a Ginibre matrix with the phases of diag(R) removed (Haar).
  Matrix unitary(Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(ginibre(n));
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) q.col(j) *= std::abs(r(j, j)) > 0 ? r(j, j) / std::abs(r(j, j)) : cplx{1.0};
    return q;
  }

  Matrix pure_state(Eigen::Index n) {
    Vector psi = complex_vector(n);
    psi.normalize();
    return psi * psi.adjoint();
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kmslab
