#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kmslab/random.hpp"
#include "kmslab/toy_chain.hpp"

using namespace kmslab;
using namespace kmslab::chain;

namespace {

CouplingTensor random_coupling(Rng& rng, std::size_t d, double scale) {
  CouplingTensor x(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t m = 0; m < d; ++m) x(k, l, r, m) = scale * rng.complex_normal();
  CouplingTensor h(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t m = 0; m < d; ++m) h(k, l, r, m) = 0.5 * (x(k, l, r, m) + std::conj(x(r, m, k, l)));
  return h;
}

ToyChainSpec make_spec(std::size_t sites, std::size_t d, CouplingTensor h, double beta) {
  ToyChainSpec s;
  s.sites = sites;
  s.d = d;
  s.coupling = std::move(h);
  s.beta = beta;
  return s;
}

}  // namespace

TEST_CASE("free chain Hamiltonian") {
  const auto spec = make_spec(2, 3, CouplingTensor(3), 1.0);
  const Matrix h = build_hamiltonian(spec);
  std::vector<double> diag;
  for (int i = 0; i < 9; ++i) diag.push_back(h(i, i).real());
  CHECK(max_abs(h - Matrix(h.diagonal().asDiagonal())) == 0.0);
  for (int i = 0; i < 9; ++i) CHECK(diag[static_cast<std::size_t>(i)] == (i % 3) + (i / 3));
}

TEST_CASE("two-site chain with a density-density coupling") {
  const double g = 0.3;
  CouplingTensor c(2);
  c(0, 1, 0, 1) = g;
  c(1, 0, 1, 0) = g;
  const auto spec = make_spec(2, 2, c, 1.0);
  const Matrix h = build_hamiltonian(spec);
  CHECK(hermiticity_defect(h) <= 1e-12);
  // Hand oracle: both bonds coincide for N = 2, so each off-diagonal occupation
  // pattern picks up 4g.
  const auto ev = hermitian_spectrum(h).values;
  std::vector<double> expected{0.0, 1.0 + 4 * g, 1.0 + 4 * g, 2.0};
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 4; ++i) CHECK(ev(i) == doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-13));
}

TEST_CASE("spec validation") {
  Rng rng(1);
  CHECK_THROWS_AS(build_hamiltonian(make_spec(1, 2, CouplingTensor(2), 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(build_hamiltonian(make_spec(2, 3, CouplingTensor(2), 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(build_hamiltonian(make_spec(13, 2, CouplingTensor(2), 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(build_hamiltonian(make_spec(2, 2, CouplingTensor(2), 0.0)), std::invalid_argument);
  CouplingTensor bad(2);
  bad(0, 1, 1, 0) = 1.0;
  CHECK_THROWS_AS(build_hamiltonian(make_spec(2, 2, bad, 1.0)), std::invalid_argument);
  for (int t = 0; t < 5; ++t) {
    const auto spec = make_spec(3, 3, random_coupling(rng, 3, 0.2), 1.0);
    CHECK(hermiticity_defect(build_hamiltonian(spec)) <= 1e-12);
  }
}

TEST_CASE("local derivative decomposition") {
  SUBCASE("free chain") {
    const auto spec = make_spec(3, 3, CouplingTensor(3), 1.0);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto ld = local_derivative(spec, k);
      const Matrix x = site_operator(spec, matrix_unit(3, k, 0), 0);
      CHECK(max_abs(ld.commutator - cplx{0.0, double(k)} * x) <= 1e-14);
      CHECK(ld.residual <= 1e-14);
    }
    CHECK(max_abs(local_derivative(spec, 0).commutator) == 0.0);
  }
  SUBCASE("random couplings") {
    Rng rng(7);
    for (std::size_t d : {2u, 3u})
      for (std::size_t n : {2u, 3u})
        for (int t = 0; t < 10; ++t) {
          const auto spec = make_spec(n, d, random_coupling(rng, d, 0.3), 1.0);
          for (std::size_t k = 0; k < d; ++k) {
            const auto ld = local_derivative(spec, k);
            CHECK(ld.residual <= 1e-10);
            CHECK(std::isfinite(ld.printed_residual));
          }
        }
  }
  SUBCASE("out of range") {
    const auto spec = make_spec(2, 2, CouplingTensor(2), 1.0);
    CHECK_THROWS_AS(local_derivative(spec, 2), std::out_of_range);
  }
}

TEST_CASE("coupling growth condition") {
  CHECK(coupling_condition(CouplingTensor(4), 0.0).c_star == 0.0);
  CHECK_THROWS_AS(coupling_condition(CouplingTensor(2), 0.5), std::invalid_argument);

  const std::size_t d = 8;
  CouplingTensor h(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t m = 0; m < d; ++m) h(k, l, r, m) = std::exp(-double(k + l + r + m));
  double geo = 0.0;
  for (std::size_t j = 0; j < d; ++j) geo += std::exp(-double(j));
  const auto cond = coupling_condition(h, 0.0);
  CHECK(cond.c_star == doctest::Approx(geo * geo * geo).epsilon(1e-13));
  CHECK(cond.growth[3] == doctest::Approx(std::exp(-3.0) * geo * geo * geo).epsilon(1e-13));
  CHECK(cond.shift_norm == doctest::Approx(geo * geo).epsilon(1e-13));

  const auto steep = coupling_condition(h, -1.0);
  CHECK(steep.c_star >= cond.c_star);
}

TEST_CASE("bound constants") {
  const auto zero = bound_constants(CouplingTensor(3));
  CHECK(zero.shift == 0.0);
  for (double v : zero.h) CHECK(v == 0.0);
  Rng rng(5);
  const auto c = random_coupling(rng, 3, 0.1);
  const auto bc = bound_constants(c);
  CHECK(bc.h.size() == 3);
  CHECK(bc.shift >= 0.0);
}

TEST_CASE("occupation profile") {
  SUBCASE("free chain factorizes") {
    const auto spec = make_spec(3, 4, CouplingTensor(4), 1.0);
    const auto p = occupation_profile(spec);
    double z = 0.0;
    for (int j = 0; j < 4; ++j) z += std::exp(-double(j));
    for (std::size_t k = 0; k < 4; ++k) CHECK(p.occupation[k] == doctest::Approx(std::exp(-double(k)) / z).epsilon(1e-12));
    CHECK(p.tail[0] == doctest::Approx(1.0 - 1.0 / z).epsilon(1e-12));
    CHECK(p.tail[3] == 0.0);
  }
  SUBCASE("coupled chain") {
    Rng rng(3);
    const auto spec = make_spec(3, 4, random_coupling(rng, 4, 0.05), 1.0);
    const auto p = occupation_profile(spec);
    for (const auto& site : p.occupation_by_site) {
      double total = 0.0;
      for (double w : site) {
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
        total += w;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(p.translation_defect <= 1e-10);
  }
}

TEST_CASE("occupations lie below the decay bound") {
  Rng rng(11);
  for (int t = 0; t < 5; ++t) {
    const auto spec = make_spec(3, 4, random_coupling(rng, 4, 0.02), 1.0);
    const auto rows = occupation_vs_bound(spec);
    int bounded = 0;
    for (const auto& r : rows) {
      CHECK(r.holds);
      if (r.has_bound && !r.query.vacuous) ++bounded;
    }
    CHECK(bounded >= 2);
  }
}

TEST_CASE("chain Gibbs state passes the KMS inequality") {
  Rng rng(13);
  const auto spec = make_spec(3, 3, random_coupling(rng, 3, 0.2), 0.8);
  for (const auto& r : chain_kms_gaps(spec)) CHECK(r.gap >= -1e-8);
}

TEST_CASE("truncation drift of the free chain") {
  const auto spec = make_spec(2, 3, CouplingTensor(3), 1.0);
  double z3 = 0.0, z4 = 0.0;
  for (int j = 0; j < 3; ++j) z3 += std::exp(-double(j));
  z4 = z3 + std::exp(-3.0);
  CHECK(truncation_drift(spec) == doctest::Approx(1.0 / z3 - 1.0 / z4).epsilon(1e-12));
}

TEST_CASE("window entropies") {
  SUBCASE("low temperature free chain is pure") {
    const auto spec = make_spec(3, 2, CouplingTensor(2), 50.0);
    const std::vector<std::size_t> w{3};
    CHECK(std::abs(local_entropy_report(spec, w).windows[0].entropy) <= 1e-12);
  }
  SUBCASE("free chain entropy is additive") {
    const auto spec = make_spec(3, 3, CouplingTensor(3), 1.0);
    const std::vector<std::size_t> w{1, 2};
    const auto rep = local_entropy_report(spec, w);
    CHECK(rep.windows[1].entropy == doctest::Approx(2.0 * rep.windows[0].entropy).epsilon(1e-12));
  }
  SUBCASE("coupled chain is subadditive") {
    Rng rng(17);
    const auto spec = make_spec(4, 3, random_coupling(rng, 3, 0.4), 0.7);
    const std::vector<std::size_t> w{1, 2, 3};
    const auto rep = local_entropy_report(spec, w);
    CHECK(rep.subadditivity.size() >= 4);
    for (const auto& c : rep.subadditivity) CHECK(c.holds);
  }
  SUBCASE("window too large") {
    const auto spec = make_spec(2, 2, CouplingTensor(2), 1.0);
    const std::vector<std::size_t> w{3};
    CHECK_THROWS_AS(local_entropy_report(spec, w), std::invalid_argument);
  }
}
