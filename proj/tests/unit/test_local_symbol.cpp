#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kmslab/phase_space.hpp"

using namespace kmslab;
using namespace kmslab::phase;

namespace {

constexpr double kPi = std::numbers::pi;

double fermi_dirac(double p, double) { return 1.0 / (1.0 + std::exp(p * p)); }

// Composite Simpson, n even.
template <class F>
auto simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  decltype(f(a)) s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Fourier transform of e_n, (2 pi)^{-1/2} int_cell e_n(x) e^{-ikx} dx, by
// Simpson in x.
cplx transform(int n, double k) {
  return simpson([&](double x) { return cosine_basis(n, x) * std::polar(1.0, -k * x); }, 0.0, 2 * kPi, 4000) /
         std::sqrt(2 * kPi);
}

// <n| n(P) |m> = int dk n(k) conj(e_n^(k)) e_m^(k).
double quasifree_oracle(int n, int m) {
  return simpson([&](double k) { return fermi_dirac(k, 0.0) * std::conj(transform(n, k)) * transform(m, k); }, -8.0,
                   8.0, 1600)
      .real();
}

}  // namespace

TEST_CASE("zero density") {
  auto none = [](double, double) { return 0.0; };
  for (auto model : {TwoPointModel::quasifree, TwoPointModel::diagonal}) {
    const auto s = local_symbol_from_twopoint(none, 6, 1, model);
    CHECK(max_abs(s.rho) == 0.0);
    CHECK(s.diagonal_tail[0] == 0.0);
  }
}

TEST_CASE("hypotheses are enforced") {
  auto flat = [](double, double) { return 1.0; };
  auto slow = [](double p, double) { return 1.0 / (1.0 + p * p); };
  auto negative = [](double p, double) { return -std::exp(-p * p); };
  CHECK_THROWS_AS(local_symbol_from_twopoint(flat, 5, 1, TwoPointModel::quasifree), std::invalid_argument);
  CHECK_THROWS_AS(local_symbol_from_twopoint(slow, 5, 1, TwoPointModel::diagonal), std::invalid_argument);
  CHECK_THROWS_AS(local_symbol_from_twopoint(negative, 5, 1, TwoPointModel::diagonal), std::invalid_argument);
  CHECK_THROWS_AS(local_symbol_from_twopoint(fermi_dirac, 5, 3, TwoPointModel::diagonal), std::invalid_argument);
  CHECK_THROWS_AS(local_symbol_from_twopoint(fermi_dirac, -1, 1, TwoPointModel::diagonal), std::invalid_argument);
  // p^{-4} itself is admissible.
  auto quartic = [](double p, double) { return 1.0 / (1.0 + p * p * p * p); };
  CHECK_NOTHROW(local_symbol_from_twopoint(quartic, 3, 1, TwoPointModel::quasifree));
}

TEST_CASE("quasifree model against direct Fourier transforms") {
  const auto s = local_symbol_from_twopoint(fermi_dirac, 6, 1, TwoPointModel::quasifree);
  for (auto [n, m] : {std::pair{0, 0}, std::pair{1, 1}, std::pair{0, 2}, std::pair{3, 5}, std::pair{2, 4}})
    CHECK(std::abs(s.rho(n, m) - quasifree_oracle(n, m)) < 1e-8);
}

TEST_CASE("diagonal model against the position kernel") {
  // For wbar = exp(-p^2) the q and p integrals close:
  // rho(x, y) = exp(-(x - y)^2/2) / (2 sqrt(pi)).
  auto gauss = [](double p, double) { return std::exp(-p * p); };
  const auto s = local_symbol_from_twopoint(gauss, 5, 1, TwoPointModel::diagonal);
  auto oracle = [](int n, int m) {
    return simpson(
        [&](double x) {
          return simpson([&](double y) { return cosine_basis(n, x) * cosine_basis(m, y) * std::exp(-(x - y) * (x - y) / 2); },
                           0.0, 2 * kPi, 600);
        },
        0.0, 2 * kPi, 600) /
           (2 * std::sqrt(kPi));
  };
  for (auto [n, m] : {std::pair{0, 0}, std::pair{1, 1}, std::pair{0, 2}, std::pair{4, 4}, std::pair{1, 3}})
    CHECK(std::abs(s.rho(n, m) - oracle(n, m)) < 1e-6);
}

TEST_CASE("Fermi-Dirac symbol") {
  for (auto model : {TwoPointModel::quasifree, TwoPointModel::diagonal}) {
    const auto s = local_symbol_from_twopoint(fermi_dirac, 20, 1, model);
    CHECK(s.rho.rows() == 21);
    CHECK(hermiticity_defect(s.rho) == 0.0);
    for (double e : s.eigenvalues) {
      CHECK(e >= -1e-9);
      CHECK(e <= 1 + 1e-9);
    }
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) CHECK(s.eigenvalues[i] <= s.eigenvalues[i - 1]);
    CHECK(s.diagonal_tail[15] < 1e-3);
    for (std::size_t k = 1; k < s.diagonal_tail.size(); ++k) CHECK(s.diagonal_tail[k] <= s.diagonal_tail[k - 1]);
    CHECK(s.diagonal_tail.back() == 0.0);
    double trace = 0.0;
    for (Eigen::Index n = 0; n < s.rho.rows(); ++n) trace += s.rho(n, n).real();
    CHECK(trace == doctest::Approx(s.diagonal_tail[0] + s.rho(0, 0).real()).epsilon(1e-12));
  }
  // Larger cutoff reproduces the leading block.
  const auto small = local_symbol_from_twopoint(fermi_dirac, 8, 1, TwoPointModel::quasifree);
  const auto large = local_symbol_from_twopoint(fermi_dirac, 16, 1, TwoPointModel::quasifree);
  CHECK(max_abs(small.rho - large.rho.topLeftCorner(9, 9)) < 1e-12);
}
