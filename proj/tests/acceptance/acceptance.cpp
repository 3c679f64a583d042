// One PASS/FAIL line per acceptance criterion. A criterion fails when any of
// its sub-checks fails. The exit status ignores sub-checks marked unattainable;
// those still turn their line into FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kmslab/decay.hpp"
#include "kmslab/fock.hpp"
#include "kmslab/kms.hpp"
#include "kmslab/phase_space.hpp"
#include "kmslab/quasifree.hpp"
#include "kmslab/random.hpp"
#include "kmslab/toy_chain.hpp"

using namespace kmslab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  // Failures outside the unattainable list.
  bool gate = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string& what, bool attainable = true) {
    if (ok) return;
    pass = false;
    if (attainable) gate = false;
    failures += " [failed: " + what + (attainable ? "" : ", unattainable") + "]";
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = fock::annihilator(0, 1);
  const auto n = fock::creator(0, 1) * a;
  double worst = 0.0;
  for (double eps : {-2.0, -0.5, 0.0, 1.0, 3.0})
    for (double mu : {-1.0, -0.3, 0.0, 0.5, 2.0})
      for (double beta : {0.2, 1.0, 5.0}) {
        const auto ens = fock::gibbs_state(cplx{eps} * n, beta, mu);
        const double expected = 1.0 / (1.0 + std::exp(beta * (eps + mu)));
        worst = std::max(worst, std::abs(fock::expectation(ens.rho, n).real() - expected));
      }
  bool monotone = true;
  double final_width = 0.0;
  for (double p0 : {0.0, 1.0, 2.0})
    for (double mu : {0.0, 0.5}) {
      double prev = INFINITY;
      for (double b = 1.0; b >= 1.0 / 1024; b /= 2) {
        const double width = kms::fermi_dirac_sandwich(p0, mu, b).width();
        if (!(width < prev)) monotone = false;
        prev = width;
      }
      final_width = std::max(final_width, prev);
    }
  const double t = seconds_since(t0);
  o.require(worst <= 1e-12, "Gibbs occupation residual");
  o.require(monotone, "sandwich widths monotone");
  o.require(t < 1.0, "runtime");
  o.detail << "max residual " << worst << " over 75 points, widths monotone " << monotone << " (final width "
           << final_width << "), " << t << " s";
}

void criterion2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2);
  double worst = INFINITY;
  std::size_t samples = 0;
  for (std::size_t m : {2, 3, 4}) {
    const auto dim = static_cast<Eigen::Index>(fock::fock_dimension(m));
    for (double beta : {0.2, 1.0, 5.0})
      for (int h = 0; h < 20; ++h) {
        const auto ens = fock::gibbs_state(fock::FockOperator(m, rng.hermitian(dim)), beta, 0.0);
        for (int k = 0; k < 50; ++k) {
          worst = std::min(worst, kms::kms_gap(ens, rng.ginibre(dim)).gap);
          ++samples;
        }
      }
  }
  // Matrix units between eigenstates of a diagonal generator saturate the inequality.
  double eigen_worst = 0.0;
  for (std::size_t m : {2, 3, 4}) {
    const auto dim = static_cast<Eigen::Index>(fock::fock_dimension(m));
    Matrix h = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) h(i, i) = rng.uniform(-2.0, 2.0);
    for (double beta : {0.2, 1.0, 5.0}) {
      const auto ens = fock::gibbs_state(fock::FockOperator(m, h), beta, 0.0);
      for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) {
          if (i == j) continue;
          Matrix e = Matrix::Zero(dim, dim);
          e(i, j) = 1.0;
          eigen_worst = std::max(eigen_worst, std::abs(kms::kms_gap(ens, e).gap));
        }
    }
  }
  // States thermal at twice the inverse temperature are caught by some candidate.
  int witnessed = 0, mismatched = 0;
  for (std::size_t m : {2, 3, 4}) {
    const auto dim = static_cast<Eigen::Index>(fock::fock_dimension(m));
    for (int trial = 0; trial < 5; ++trial) {
      const fock::FockOperator h(m, rng.hermitian(dim));
      const auto wrong = fock::gibbs_state(h, 2.0, 0.0);
      // Random operators plus the transitions |e_i><e_j| between eigenvectors.
      std::vector<fock::FockOperator> cands;
      for (int k = 0; k < 20; ++k) cands.emplace_back(m, rng.ginibre(dim));
      const auto spec = hermitian_spectrum(h.matrix());
      for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
          if (i != j) cands.emplace_back(m, spec.vectors.col(i) * spec.vectors.col(j).adjoint());
      ++mismatched;
      witnessed += kms::kms_violation_witness(wrong.rho, h, 1.0, 0.0, cands).has_value();
    }
  }
  const double t = seconds_since(t0);
  o.require(worst >= -1e-8, "Gibbs gap");
  o.require(eigen_worst <= 1e-9, "eigenoperator saturation");
  o.require(witnessed == mismatched, "beta-mismatch witnesses");
  o.require(t < 60.0, "runtime");
  o.detail << "min gap " << worst << " over " << samples << " samples, eigenoperator |gap| <= " << eigen_worst
           << ", witnesses " << witnessed << "/" << mismatched << ", " << t << " s";
}

void criterion3(Outcome& o) {
  double residual = 0.0;
  for (double h : {0.0, 0.5, 1.0, 2.0, 5.0})
    for (double lambda = 5.0; lambda <= 50.0; lambda += 1.0) {
      const double y = decay::solve_y_min(lambda, h);
      residual = std::max(residual, std::abs(decay::decay_residual(lambda, h, 0.0, y)));
    }
  double closed = 0.0;
  for (double lambda : {0.5, 1.0, 5.0, 20.0, 50.0})
    closed = std::max(closed, std::abs(decay::decay_query(lambda, 0.0).w_bound / std::exp(-lambda) - 1.0));
  const auto q = decay::decay_query(50.0, 1.0);
  const double ratio = q.w_bound * 50.0 * 50.0 / 2.0;

  std::vector<double> far;
  for (int i = 0; i <= 40; ++i) far.push_back(200.0 + 5.0 * i);
  bool sub_unit_ok = true, super_unit_ok = true;
  std::ostringstream slopes;
  for (double d : {0.25, 0.5, 0.75, 1.0, 2.0}) {
    const double slope = decay::fit_decay(decay::ExponentialProfile{d}, far).slope;
    const double target = d < 1.0 ? -d : -1.0;
    const bool ok = std::abs(slope - target) <= 0.05;
    (d < 1.0 ? sub_unit_ok : super_unit_ok) &= ok;
    slopes << " d=" << d << ":" << slope;
  }
  o.require(residual <= 1e-10, "solver residual");
  o.require(closed <= 1e-12, "h=0 closed form");
  o.require(ratio < 0.01, "w*lambda^2/(h^2+1) < 0.01 at lambda=50", false);
  o.require(sub_unit_ok, "slope -d for 0<d<1", false);
  o.require(super_unit_ok, "slope -1 for d>=1");
  o.detail << "residual " << residual << ", h=0 rel err " << closed << ", ratio(50,1) " << ratio << ", slopes"
           << slopes.str();
}

chain::CouplingTensor random_coupling(Rng& rng, std::size_t d, double scale) {
  chain::CouplingTensor x(d), h(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t m = 0; m < d; ++m) x(k, l, r, m) = scale * rng.complex_normal();
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t m = 0; m < d; ++m) h(k, l, r, m) = 0.5 * (x(k, l, r, m) + std::conj(x(r, m, k, l)));
  return h;
}

void criterion4(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(4);
  chain::ToyChainSpec spec;
  spec.sites = 3;
  spec.d = 4;
  spec.beta = 1.0;
  spec.coupling = random_coupling(rng, 4, 0.02);
  const auto cond = chain::coupling_condition(spec.coupling, 0.0);

  bool below = true, nonvacuous = true;
  for (const auto& row : chain::occupation_vs_bound(spec)) {
    if (row.k == 0) continue;
    nonvacuous = nonvacuous && row.has_bound && !row.query.vacuous;
    below = below && row.holds && row.occupation <= row.query.w_bound;
  }
  double derivative = 0.0;
  for (std::size_t k = 0; k < spec.d; ++k) derivative = std::max(derivative, chain::local_derivative(spec, k).residual);
  const double translation = chain::occupation_profile(spec).translation_defect;
  const std::size_t windows[] = {1, 2};
  bool subadditive = true;
  for (const auto& s : chain::local_entropy_report(spec, windows).subadditivity) subadditive = subadditive && s.holds;
  const double t = seconds_since(t0);
  o.require(std::isfinite(cond.c_star), "coupling growth condition");
  o.require(below && nonvacuous, "occupations below a non-vacuous bound");
  o.require(derivative <= 1e-10, "commutator decomposition");
  o.require(translation <= 1e-10, "translation invariance");
  o.require(subadditive, "subadditivity");
  o.require(t < 120.0, "runtime");
  o.detail << "dim " << spec.dimension() << ", c* " << cond.c_star << ", bound holds " << below
           << ", derivative residual " << derivative << ", translation defect " << translation << ", " << t << " s";
}

void criterion5(Outcome& o) {
  double kernel = 0.0;
  int points = 0;
  for (double c : {0.2, 0.5, 1.0, 2.0, 5.0})
    for (double shift : {-3.0, -1.0, 0.0, 1.5, 3.0})
      for (double qq : {-4.0, -1.0, 0.0, 2.0, 5.0}) {
        phase::GaussKernelParams k;
        k.c = c;
        k.p0 = RealVector::Constant(1, 0.7);
        k.pprime = RealVector::Constant(1, 0.7 - shift);
        k.qprime = RealVector::Constant(1, qq);
        const cplx closed = phase::anticommutator_kernel(k);
        kernel = std::max(kernel, std::abs(closed - phase::anticommutator_kernel_quadrature(k)) / (1 + std::abs(closed)));
        ++points;
      }
  const auto v = phase::PotentialSpec::gaussian(1.0, 1.0), w = phase::PotentialSpec::gaussian(1.0, 1.0);
  const std::vector<double> p0s{0.0, 5.0, 20.0};
  const auto uni = phase::lemma1_uniformity(v, w, 1.0, 1, p0s);

  Rng rng(5);
  double identity = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto m = static_cast<Eigen::Index>(2 + t % 3);
    const fock::ModeVector h{rng.complex_vector(m)}, g{rng.complex_vector(m)};
    identity = std::max(identity, phase::positivity_decomposition_check(h, g, rng.uniform(-3, 3)).identity_residual);
  }
  o.require(kernel <= 1e-8, "kernel closed form");
  o.require(uni.relative_spread <= 1e-6, "Lemma-1 uniformity");
  o.require(identity <= 1e-12, "operator identity");
  o.detail << "kernel " << kernel << " over " << points << " points, bound spread " << uni.relative_spread
           << " (value " << uni.values[0] << "), identity residual " << identity;
}

Matrix random_symbol(Rng& rng, Eigen::Index m) {
  Matrix d = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) d(i, i) = rng.uniform();
  const Matrix u = rng.unitary(m);
  const Matrix r = u * d * u.adjoint();
  return 0.5 * (r + r.adjoint());
}

void criterion6(Outcome& o) {
  Rng rng(6);
  int dominated = 0;
  double identity = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const qf::QuasifreeSymbol r(random_symbol(rng, 3));
    const auto rep = qf::entropy_dominance_check(rng.density_matrix(8), r);
    dominated += rep.entropy <= rep.pinched_entropy + 1e-9;
    identity = std::max(identity, rep.identity_residual);
  }
  double formula = 0.0;
  for (int t = 0; t < 50; ++t) {
    const qf::QuasifreeSymbol r(random_symbol(rng, 1 + t % 5));
    formula = std::max(formula, std::abs(qf::binary_entropy_sum(r) - von_neumann_entropy(qf::quasifree_density_matrix(r))));
  }
  auto fd = [](double p, double) { return 1.0 / (1.0 + std::exp(p * p)); };
  const auto local = phase::local_symbol_from_twopoint(fd, 20, 1, phase::TwoPointModel::quasifree);
  const qf::QuasifreeSymbol fd_symbol(local.rho);
  const double c = 1.0;
  const auto fd_cert = qf::trace_class_certificate(fd_symbol, c, 1.0);
  const auto flat_cert = qf::trace_class_certificate(qf::QuasifreeSymbol(0.5 * Matrix::Identity(21, 21)), c, 1.0);
  o.require(dominated == 1000, "dominance");
  o.require(identity <= 1e-9, "relative entropy identity");
  o.require(formula <= 1e-10, "binary entropy formula");
  o.require(fd_cert.pass, "Fermi-Dirac certificate");
  o.require(!flat_cert.pass, "flat symbol rejected");
  o.detail << "dominated " << dominated << "/1000, identity " << identity << ", formula " << formula
           << ", FD certificate (c=1, eps=1) " << (fd_cert.pass ? "pass" : "fail") << " with smallest c "
           << qf::smallest_certificate_constant(fd_symbol, 1.0) << ", flat fails at n=" << flat_cert.worst_n;
}

void criterion7(Outcome& o) {
  std::vector<double> xg;
  for (int i = 0; i <= 40; ++i) xg.push_back(-4 + 0.2 * i);
  const std::vector<double> gammas{0.5, 0.25, 0.125};
  const auto rows = phase::cutoff_collapse_check(gammas, 0.0, xg);
  const bool decreasing = rows[1].distance < rows[0].distance && rows[2].distance < rows[1].distance;

  double smallest = INFINITY;
  const std::vector<std::function<double(double, double)>> densities{
      [](double x, double y) { return std::exp(-(x - 0.5) * (x - 0.5) - y * y / 2); },
      [](double x, double y) { return 1.0 / (1.0 + x * x + y * y); },
      [](double x, double y) { return std::exp(-(x - y) * (x - y)); },
      [](double, double) { return 0.0; }};
  std::vector<double> gx, gv;
  for (int i = -20; i <= 20; ++i) {
    gx.push_back(0.2 * i);
    gv.push_back(std::max(0.0, 1.0 - std::abs(0.2 * i) / 3.0));
  }
  const std::vector<phase::PotentialSpec> potentials{phase::PotentialSpec::gaussian(1.0, 2.0),
                                                     phase::PotentialSpec::gaussian(0.3, 5.0),
                                                     phase::PotentialSpec::grid(gx, gv)};
  int cases = 0;
  for (const auto& v : potentials)
    for (const auto& rho : densities)
      for (double width : {0.7, 1.5}) {
        smallest = std::min(smallest, phase::repulsive_quadratic_form(v, width, rho, phase::PotentialClass::repulsive));
        ++cases;
      }

  // tau(x) tau(y) v(x - y) with tau = (1 - x^2) e^{-x^2/2}: by Parseval the
  // form is S sigma sqrt(pi) (3/4) sqrt(pi) (1 + sigma^2/4)^{-5/2}.
  double fourier = 0.0;
  for (double sigma : {0.5, 1.0, 2.0}) {
    const double strength = 1.3;
    auto tau = [](double x) { return (1 - x * x) * std::exp(-x * x / 2); };
    auto rho = [&](double x, double y) { return tau(x) * tau(y) / (std::exp(-y * y / 4) / (std::sqrt(kPi) * 2)); };
    const double a = 1 + sigma * sigma / 4;
    const double oracle = strength * sigma * std::sqrt(kPi) * 0.75 * std::sqrt(kPi) * std::pow(a, -2.5);
    const double value = phase::repulsive_quadratic_form(phase::PotentialSpec::gaussian(sigma, strength), 2.0, rho,
                                                         phase::PotentialClass::positive_type);
    fourier = std::max(fourier, std::abs(value - oracle) / oracle);
  }
  o.require(decreasing, "cutoff distances decrease");
  o.require(smallest >= 0.0, "repulsive form nonnegative");
  o.require(fourier <= 1e-6, "positive-type Fourier oracle");
  o.detail << "distances " << rows[0].distance << " > " << rows[1].distance << " > " << rows[2].distance
           << ", min repulsive form " << smallest << " over " << cases << " cases, Fourier rel err " << fourier;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::vector<std::pair<int, void (*)(Outcome&)>> criteria{{1, criterion1}, {2, criterion2}, {3, criterion3},
                                                                 {4, criterion4}, {5, criterion5}, {6, criterion6},
                                                                 {7, criterion7}};
  bool gate = true;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    o.detail.precision(3);
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = o.gate = false;
      o.failures += std::string(" [exception: ") + e.what() + "]";
    }
    gate = gate && o.gate;
    std::printf("%s criterion %d: %s%s\n", o.pass ? "PASS" : "FAIL", id, o.detail.str().c_str(), o.failures.c_str());
  }
  return gate ? 0 : 1;
}
