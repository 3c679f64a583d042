#include "kmslab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace kmslab::quad {

Result integrate(const std::function<double(double)>& f, double a, double b, unsigned max_depth, double rel_tol) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  Result r;
  double l1 = 0.0;
  r.value = GK::integrate(f, a, b, max_depth, rel_tol, &r.error, &l1);
  if (!std::isfinite(r.value) || r.error > std::max(kAbsTolerance, kFailureFraction * std::abs(r.value))) {
    std::ostringstream os;
    os << "adaptive quadrature on [" << a << ", " << b << "] did not converge: value " << r.value << ", error "
       << r.error;
    throw NumericalError(os.str());
  }
  return r;
}

double integral(const std::function<double(double)>& f, double a, double b) { return integrate(f, a, b).value; }

cplx integral(const std::function<cplx(double)>& f, double a, double b) {
  const double re = integrate([&](double x) { return f(x).real(); }, a, b).value;
  const double im = integrate([&](double x) { return f(x).imag(); }, a, b).value;
  return {re, im};
}

double integral(const std::function<double(double)>& f, const std::vector<double>& breaks) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) s += integrate(f, breaks[i], breaks[i + 1]).value;
  return s;
}

Rule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(ni, ni);
  for (Eigen::Index k = 1; k < ni; ++k) {
    const double kk = static_cast<double>(k);
    jacobi(k, k - 1) = jacobi(k - 1, k) = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  Rule rule;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (Eigen::Index k = 0; k < ni; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    rule.nodes.push_back(mid + half * es.eigenvalues()(k));
    rule.weights.push_back(2.0 * v0 * v0 * half);
  }
  return rule;
}

Rule composite_gauss_legendre(std::size_t panels, std::size_t n, double a, double b) {
  if (panels == 0) throw std::invalid_argument("composite_gauss_legendre: need at least one panel");
  Rule out;
  const double h = (b - a) / static_cast<double>(panels);
  const Rule ref = gauss_legendre(n, 0.0, h);
  for (std::size_t p = 0; p < panels; ++p) {
    const double left = a + h * static_cast<double>(p);
    for (std::size_t i = 0; i < n; ++i) {
      out.nodes.push_back(left + ref.nodes[i]);
      out.weights.push_back(ref.weights[i]);
    }
  }
  return out;
}

QuadraticExponent::QuadraticExponent(Eigen::Index n) : a(Matrix::Zero(n, n)), b(Vector::Zero(n)) {}

void QuadraticExponent::add_square(Eigen::Index i, double center, double w) {
  a(i, i) += w;
  b(i) += 2.0 * w * center;
  c -= w * center * center;
}

void QuadraticExponent::add_difference_square(Eigen::Index i, Eigen::Index j, double shift, double w) {
  a(i, i) += w;
  a(j, j) += w;
  a(i, j) -= w;
  a(j, i) -= w;
  b(i) += 2.0 * w * shift;
  b(j) -= 2.0 * w * shift;
  c -= w * shift * shift;
}

void QuadraticExponent::add_product(Eigen::Index i, Eigen::Index j, cplx coeff) {
  if (i == j) {
    a(i, i) -= coeff;
  } else {
    a(i, j) -= 0.5 * coeff;
    a(j, i) -= 0.5 * coeff;
  }
}

void QuadraticExponent::add_linear(Eigen::Index i, cplx coeff) { b(i) += coeff; }

GaussianFamily::GaussianFamily(const Matrix& a) {
  const Eigen::Index n = a.rows();
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  cplx inv_sqrt_det{1.0, 0.0};
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx lam = es.eigenvalues()(k);
    if (!(lam.real() > 0.0)) throw std::invalid_argument("gaussian_integral: real part of A is not positive definite");
    inv_sqrt_det /= std::sqrt(lam);
  }
  prefactor_ = std::pow(std::numbers::pi, 0.5 * static_cast<double>(n)) * inv_sqrt_det;
  inverse_ = a.partialPivLu().inverse();
}

cplx GaussianFamily::integral(const Vector& b, cplx c) const {
  const cplx quad = b.transpose() * (inverse_ * b);
  return prefactor_ * std::exp(0.25 * quad + c);
}

cplx gaussian_integral(const QuadraticExponent& e) { return GaussianFamily(e.a).integral(e.b, e.c); }

}  // namespace kmslab::quad
