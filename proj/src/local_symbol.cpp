#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kmslab/phase_space.hpp"
#include "kmslab/quadrature.hpp"

namespace kmslab::phase {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// Fourier transform of e_n up to the common phase exp(-i pi k):
// (-1)^n/sqrt(2) [sinc(pi(k-n)) + sinc(pi(k+n))], and sinc(pi k) for n = 0.
double cell_transform(int n, double k) {
  if (n == 0) return sinc(kPi * k);
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  return sign * (1.0 / std::numbers::sqrt2) * (sinc(kPi * (k - n)) + sinc(kPi * (k + n)));
}

void probe_twopoint(const std::function<double(double, double)>& wbar) {
  auto sup_q = [&](double p) {
    double m = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double q = 2.0 * kPi * i / 64.0;
      for (double s : {p, -p}) {
        const double w = wbar(s, q);
        if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("two-point symbol must take values in [0, 1]");
        m = std::max(m, s * s * s * s * w);
      }
    }
    return m;
  };
  for (double p = 0.0; p <= 16.0; p += 0.25) sup_q(p);
  const double near = sup_q(8.0);
  for (double p = 16.0; p <= 256.0; p *= 2.0) sup_q(p);
  if (sup_q(256.0) > 2.0 * near) throw std::invalid_argument("two-point symbol does not decay like |p|^-4");
}

Matrix quasifree_symbol(const std::function<double(double, double)>& wbar, int n_max) {
  const double k_max = n_max + 64.0;
  const auto rule = quad::composite_gauss_legendre(static_cast<std::size_t>(2 * k_max), 8, -k_max, k_max);
  const auto n = static_cast<Eigen::Index>(n_max + 1);
  Eigen::MatrixXd b(n, static_cast<Eigen::Index>(rule.nodes.size()));
  for (Eigen::Index i = 0; i < b.cols(); ++i) {
    const double k = rule.nodes[static_cast<std::size_t>(i)];
    const double root = std::sqrt(rule.weights[static_cast<std::size_t>(i)] * wbar(k, 0.0));
    for (Eigen::Index m = 0; m < n; ++m) b(m, i) = root * cell_transform(static_cast<int>(m), k);
  }
  return (b * b.transpose()).cast<cplx>();
}

Matrix diagonal_symbol(const std::function<double(double, double)>& wbar, int n_max) {
  const auto xr = quad::composite_gauss_legendre(24, 8, 0.0, 2.0 * kPi);
  const double p_max = n_max + 12.0;
  const auto pr = quad::composite_gauss_legendre(static_cast<std::size_t>(2 * p_max), 8, -p_max, p_max);
  const auto qr = quad::composite_gauss_legendre(27, 8, -10.0, 2.0 * kPi + 10.0);
  const auto nx = static_cast<Eigen::Index>(xr.nodes.size());
  const auto np = static_cast<Eigen::Index>(pr.nodes.size());
  const auto nq = static_cast<Eigen::Index>(qr.nodes.size());

  Matrix phase(nx, np);
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < np; ++j) phase(i, j) = std::polar(1.0, pr.nodes[j] * xr.nodes[i]);
  Eigen::MatrixXd window(nq, nx);
  for (Eigen::Index a = 0; a < nq; ++a)
    for (Eigen::Index i = 0; i < nx; ++i)
      window(a, i) = std::pow(kPi, -0.25) * std::exp(-0.5 * std::pow(xr.nodes[i] - qr.nodes[a], 2)) * xr.weights[i];
  Eigen::MatrixXd weight(nq, np);
  for (Eigen::Index a = 0; a < nq; ++a)
    for (Eigen::Index j = 0; j < np; ++j)
      weight(a, j) = std::sqrt(qr.weights[a] * pr.weights[j] * wbar(pr.nodes[j], qr.nodes[a]) / (2.0 * kPi));

  const auto n = static_cast<Eigen::Index>(n_max + 1);
  Matrix b(n, nq * np);
  for (Eigen::Index m = 0; m < n; ++m) {
    Eigen::MatrixXd w = window;
    for (Eigen::Index i = 0; i < nx; ++i) w.col(i) *= cosine_basis(static_cast<int>(m), xr.nodes[i]);
    // overlap(q_a, p_j) = sum_x w(a, x) e^{i p_j x}
    const Matrix overlap = w.cast<cplx>() * phase;
    const Matrix scaled = overlap.cwiseProduct(weight.cast<cplx>());
    b.row(m) = scaled.reshaped().transpose();
  }
  return b * b.adjoint();
}

}  // namespace

LocalSymbol local_symbol_from_twopoint(const std::function<double(double, double)>& wbar, int n_max, int nu,
                                       TwoPointModel model) {
  if (nu != 1) throw std::invalid_argument("local symbol: only nu = 1 is supported");
  if (n_max < 0) throw std::invalid_argument("local symbol: n_max must be >= 0");
  probe_twopoint(wbar);

  LocalSymbol out;
  out.rho = model == TwoPointModel::quasifree ? quasifree_symbol(wbar, n_max) : diagonal_symbol(wbar, n_max);
  out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
  const auto spec = hermitian_spectrum(out.rho);
  out.eigenvalues.assign(spec.values.data(), spec.values.data() + spec.values.size());
  std::reverse(out.eigenvalues.begin(), out.eigenvalues.end());
  out.diagonal_tail.assign(static_cast<std::size_t>(n_max + 1), 0.0);
  double tail = 0.0;
  for (int k = n_max; k >= 0; --k) {
    out.diagonal_tail[static_cast<std::size_t>(k)] = tail;
    tail += out.rho(k, k).real();
  }
  return out;
}

}  // namespace kmslab::phase
