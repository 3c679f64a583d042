#include "kmslab/phase_space.hpp"

#include <math.h>

#include <algorithm>
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kmslab/quadrature.hpp"

namespace kmslab::phase {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

double sq(double x) { return x * x; }

// Half-width of the q' window used for sampled potentials: the kernel factor
// exp(-q'^2/(4(1+c))) is below e^{-36} outside.
double q_window(double c) { return 12.0 * std::sqrt(1.0 + c); }

// Sampled potentials carry interpolation error near 1e-5 relative and only a
// C1 interpolant; tighter requests multiply the work without gaining accuracy.
constexpr double kGridTolerance = 1e-6;

}  // namespace

std::vector<cplx> coherent_wavefunction(double p, double q, std::span<const double> x_grid) {
  if (x_grid.size() < 2 || !std::is_sorted(x_grid.begin(), x_grid.end()))
    throw std::invalid_argument("coherent_wavefunction: grid must be ascending with at least two points");
  if (x_grid.front() > q - 6.0 || x_grid.back() < q + 6.0)
    throw std::invalid_argument("coherent_wavefunction: grid does not cover q +- 6");
  std::vector<cplx> out(x_grid.size());
  const double norm = std::pow(kPi, -0.25);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    out[i] = norm * std::exp(cplx{-0.5 * sq(x - q), p * x});
  }
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < x_grid.size(); ++i)
    mass += 0.5 * (x_grid[i + 1] - x_grid[i]) * (std::norm(out[i]) + std::norm(out[i + 1]));
  if (std::abs(mass - 1.0) > 1e-4) throw std::invalid_argument("coherent_wavefunction: grid too coarse, norm defect > 1e-4");
  return out;
}

cplx coherent_overlap(double p, double q, double pp, double qq) {
  return std::exp(cplx{-0.25 * sq(q - qq) - 0.25 * sq(p - pp), 0.5 * (pp - p) * (q + qq)});
}

cplx coherent_overlap(const RealVector& p, const RealVector& q, const RealVector& pp, const RealVector& qq) {
  if (q.size() != p.size() || pp.size() != p.size() || qq.size() != p.size())
    throw std::invalid_argument("coherent_overlap: component count mismatch");
  cplx out{1.0, 0.0};
  for (Eigen::Index j = 0; j < p.size(); ++j) out *= coherent_overlap(p(j), q(j), pp(j), qq(j));
  return out;
}

void GaussKernelParams::validate() const {
  if (nu < 1 || nu > 3) throw std::invalid_argument("kernel: nu must be 1, 2 or 3");
  if (!(c > 0.0)) throw std::invalid_argument("kernel: c must be positive");
  if (p0.size() != nu || pprime.size() != nu || qprime.size() != nu)
    throw std::invalid_argument("kernel: vector lengths must equal nu");
}

double kernel_normalization(int nu) { return std::pow(kPi, -0.5 * nu); }

double kernel_g(double c, int nu) { return std::pow(1.0 + c, -0.5 * nu); }

cplx anticommutator_kernel(const GaussKernelParams& k) {
  k.validate();
  const double s = 1.0 / (1.0 + k.c);
  cplx expo{0.0, 0.0};
  for (int j = 0; j < k.nu; ++j) {
    const double p0 = k.p0(j), pp = k.pprime(j), qq = k.qprime(j);
    expo += cplx{-k.c * s * sq(p0 - pp) - 0.25 * s * sq(qq), qq * (pp + k.c * p0) * s};
  }
  return kernel_g(k.c, k.nu) * std::exp(expo);
}

cplx anticommutator_kernel_quadrature(const GaussKernelParams& k) {
  k.validate();
  cplx out = kernel_normalization(k.nu);
  for (int j = 0; j < k.nu; ++j) {
    const double p0 = k.p0(j), pp = k.pprime(j), qq = k.qprime(j), c = k.c;
    const double centre = (pp + c * p0) / (1.0 + c);
    const double half = 8.0 / std::sqrt(1.0 + c);
    auto f = [&](double r) { return std::exp(cplx{-sq(r - pp) - c * sq(r - p0), qq * r}); };
    out *= quad::integral(std::function<cplx(double)>(f), centre - half, centre) +
           quad::integral(std::function<cplx(double)>(f), centre, centre + half);
  }
  return out;
}

cplx anticommutator_kernel_short_form(const GaussKernelParams& k) {
  k.validate();
  cplx expo{0.0, 0.0};
  for (int j = 0; j < k.nu; ++j)
    expo += cplx{-k.c / (1.0 + k.c) * sq(k.p0(j) - k.pprime(j)), k.qprime(j) * (k.pprime(j) + k.p0(j))};
  return kernel_g(k.c, k.nu) * std::exp(expo);
}

PotentialSpec PotentialSpec::gaussian(double width, double strength, double gamma) {
  if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("gaussian potential: width must be positive");
  if (!std::isfinite(strength)) throw std::invalid_argument("gaussian potential: strength must be finite");
  if (!(gamma >= 0.0)) throw std::invalid_argument("potential: gamma must be >= 0");
  PotentialSpec s;
  s.kind_ = Kind::gaussian;
  s.width_ = width;
  s.strength_ = strength;
  s.gamma_ = gamma;
  return s;
}

PotentialSpec PotentialSpec::grid(std::vector<double> x, std::vector<double> v, double gamma) {
  if (x.size() != v.size() || x.size() < 4) throw std::invalid_argument("grid potential: need >= 4 (x, v) pairs");
  if (!(gamma >= 0.0)) throw std::invalid_argument("potential: gamma must be >= 0");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(v[i])) throw std::invalid_argument("grid potential: non-finite entry");
    if (i > 0 && !(x[i] > x[i - 1])) throw std::invalid_argument("grid potential: separations must increase");
  }
  double peak = 0.0;
  for (double y : v) peak = std::max(peak, std::abs(y));
  if (std::abs(v.front()) > 1e-3 * peak || std::abs(v.back()) > 1e-3 * peak)
    throw std::invalid_argument("grid potential: table does not decay at its ends");
  PotentialSpec s;
  s.kind_ = Kind::grid;
  s.gamma_ = gamma;
  s.grid_x_ = x;
  s.grid_v_ = v;
  s.strength_ = peak;
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(x), std::move(v));
  s.interp_ = std::make_shared<const std::function<double(double)>>([spline](double u) { return (*spline)(u); });
  return s;
}

PotentialSpec PotentialSpec::read_grid(const std::string& path, double gamma) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open potential table " + path);
  std::vector<double> x, v;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw std::invalid_argument("potential table " + path + ": expected two columns");
    x.push_back(a);
    v.push_back(b);
  }
  return grid(std::move(x), std::move(v), gamma);
}

double PotentialSpec::operator()(double u) const {
  const double cut = gamma_ > 0.0 ? std::exp(-gamma_ * u * u) : 1.0;
  if (kind_ == Kind::gaussian) return strength_ * std::exp(-sq(u / width_)) * cut;
  if (u < grid_x_.front() || u > grid_x_.back()) return 0.0;
  return (*interp_)(u)*cut;
}

PotentialSpec PotentialSpec::scaled(double factor) const {
  PotentialSpec s = *this;
  s.strength_ *= factor;
  if (kind_ == Kind::grid) {
    for (auto& y : s.grid_v_) y *= factor;
    auto base = interp_;
    s.interp_ = std::make_shared<const std::function<double(double)>>([base, factor](double u) { return factor * (*base)(u); });
  }
  return s;
}

double PotentialSpec::support_min() const {
  return kind_ == Kind::gaussian ? -std::numeric_limits<double>::infinity() : grid_x_.front();
}

double PotentialSpec::support_max() const {
  return kind_ == Kind::gaussian ? std::numeric_limits<double>::infinity() : grid_x_.back();
}

double PotentialSpec::minimum() const {
  if (kind_ == Kind::gaussian) return std::min(0.0, strength_);
  double m = 0.0;
  for (double y : grid_v_) m = std::min(m, y);
  return m;
}

namespace {

// Gaussian coefficient alpha of a gaussian profile exp(-alpha u^2).
double gaussian_alpha(const PotentialSpec& s) { return 1.0 / sq(s.width()) + s.gamma(); }

// ||g||^2 for gaussian v and w: a five-dimensional Gaussian integral over
// (p', q', p'', q'', r).
class GaussianLemma1 {
 public:
  GaussianLemma1(const PotentialSpec& v, const PotentialSpec& w, double c)
      : c_(c), s_(1.0 / (1.0 + c)), av_(gaussian_alpha(v)), aw_(gaussian_alpha(w)),
        scale_(sq(v.strength() * w.strength()) * s_), family_(build(0.0, 0.0, 0.0).a) {}

  double norm_squared(double p0, double p, double q) const {
    const auto e = build(p0, p, q);
    const cplx val = scale_ * family_.integral(e.b, e.c);
    return std::max(0.0, val.real());
  }

 private:
  quad::QuadraticExponent build(double p0, double p, double q) const {
    quad::QuadraticExponent e(5);
    const double a = c_ * s_, b = 0.25 * s_;
    for (Eigen::Index pv : {0, 2}) {
      e.add_square(pv, p, aw_);
      e.add_square(pv, p0, a);
      e.add_difference_square(4, pv, 0.0, 1.0);
    }
    for (Eigen::Index qv : {1, 3}) {
      e.add_square(qv, q, av_);
      e.add_square(qv, 0.0, b);
    }
    e.add_product(1, 0, kI * s_);
    e.add_linear(1, kI * c_ * p0 * s_);
    e.add_product(3, 2, -kI * s_);
    e.add_linear(3, -kI * c_ * p0 * s_);
    e.add_product(1, 4, -kI);
    e.add_product(3, 4, kI);
    return e;
  }

  double c_, s_, av_, aw_, scale_;
  quad::GaussianFamily family_;
};

// ||g||^2 for sampled v: the q' integral on fixed Gauss-Legendre nodes t_j,
// the (p', p'', r) integral in closed form for every node pair. The node-pair
// matrix is kappa(p) diag(z) E diag(conj z) with |z_j| = 1 and E real symmetric
// and independent of p, so ||g||^2 = kappa sum_i lambda_i |u_i^T (z v)|^2.
class GridLemma1 {
 public:
  GridLemma1(const PotentialSpec& v, const PotentialSpec& w, double c)
      : v_(v), c_(c), s_(1.0 / (1.0 + c)), aw_(gaussian_alpha(w)), scale_(sq(w.strength()) * s_),
        rule_(quad::composite_gauss_legendre(32, 8, -q_window(c), q_window(c))), family_(base_matrix()) {
    const Eigen::Matrix3d inv = family_.inverse().real();
    u1_ = Eigen::Vector3d(s_, 0.0, -1.0);
    u2_ = Eigen::Vector3d(0.0, -s_, 1.0);
    // u1, u2 carry a factor i, so their quadratic forms flip sign.
    const double u11 = -u1_.dot(inv * u1_), u22 = -u2_.dot(inv * u2_), u12 = -u1_.dot(inv * u2_);
    const auto n = static_cast<Eigen::Index>(rule_.nodes.size());
    const double b = 0.25 * s_;
    Eigen::MatrixXd e(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        const double tj = node(j), tk = node(k);
        e(j, k) = weight(j) * weight(k) *
                  std::exp(0.25 * (tj * tj * u11 + 2.0 * tj * tk * u12 + tk * tk * u22) - b * (tj * tj + tk * tk));
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (e + e.transpose()));
    const double top = es.eigenvalues().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i)
      if (es.eigenvalues()(i) > 1e-16 * top) keep.push_back(i);
    modes_.resize(static_cast<Eigen::Index>(keep.size()), n);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      modes_.row(r) = std::sqrt(es.eigenvalues()(keep[i])) * es.eigenvectors().col(keep[i]).transpose();
    }
    inv_ = inv;
    prefactor_ = scale_ * family_.prefactor().real();
  }

  struct Factors {
    double kappa;
    Vector phase;
  };

  Factors factors(double p0, double p) const {
    Eigen::Vector3d b0(2.0 * aw_ * p + 2.0 * c_ * s_ * p0, 2.0 * aw_ * p + 2.0 * c_ * s_ * p0, 0.0);
    const double b00 = b0.dot(inv_ * b0);
    const double b01 = b0.dot(inv_ * u1_);
    const double c0 = -2.0 * (aw_ * p * p + c_ * s_ * p0 * p0);
    const auto n = static_cast<Eigen::Index>(rule_.nodes.size());
    Factors f{prefactor_ * std::exp(0.25 * b00 + c0), Vector(n)};
    for (Eigen::Index j = 0; j < n; ++j) f.phase(j) = std::polar(1.0, node(j) * (0.5 * b01 + c_ * p0 * s_));
    return f;
  }

  double norm_squared(const Factors& f, double q) const {
    if (f.kappa == 0.0) return 0.0;
    const auto n = static_cast<Eigen::Index>(rule_.nodes.size());
    RealVector re(n), im(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx z = f.phase(j) * v_(q - node(j));
      re(j) = z.real();
      im(j) = z.imag();
    }
    return f.kappa * ((modes_ * re).squaredNorm() + (modes_ * im).squaredNorm());
  }

  double q_min() const { return v_.support_min() - q_window(c_); }
  double q_max() const { return v_.support_max() + q_window(c_); }

 private:
  double node(Eigen::Index j) const { return rule_.nodes[static_cast<std::size_t>(j)]; }
  double weight(Eigen::Index j) const { return rule_.weights[static_cast<std::size_t>(j)]; }

  Matrix base_matrix() const {
    quad::QuadraticExponent e(3);
    e.add_square(0, 0.0, aw_ + c_ * s_);
    e.add_square(1, 0.0, aw_ + c_ * s_);
    e.add_difference_square(2, 0, 0.0, 1.0);
    e.add_difference_square(2, 1, 0.0, 1.0);
    return e.a;
  }

  const PotentialSpec& v_;
  double c_, s_, aw_, scale_;
  quad::Rule rule_;
  quad::GaussianFamily family_;
  Eigen::Vector3d u1_, u2_;
  Eigen::Matrix3d inv_;
  Eigen::MatrixXd modes_;
  double prefactor_ = 0.0;
};

void check_lemma1_inputs(const PotentialSpec& w, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("lemma1: c must be positive");
  if (w.kind() != PotentialSpec::Kind::gaussian) throw std::invalid_argument("lemma1: w must be gaussian");
}

double lemma1_bound_1d(const PotentialSpec& v, const PotentialSpec& w, double c, double p0) {
  check_lemma1_inputs(w, c);
  const double inf = std::numeric_limits<double>::infinity();
  if (v.kind() == PotentialSpec::Kind::gaussian) {
    if (v.strength() == 0.0 || w.strength() == 0.0) return 0.0;
    const GaussianLemma1 g(v, w, c);
    auto inner = [&](double p) {
      auto f = [&](double q) { return std::sqrt(g.norm_squared(p0, p, q)); };
      return quad::integral(f, -inf, 0.0) + quad::integral(f, 0.0, inf);
    };
    return quad::integral(inner, -inf, p0) + quad::integral(inner, p0, inf);
  }
  const GridLemma1 g(v, w, c);
  std::vector<double> breaks{g.q_min(), g.q_max()};
  if (breaks[0] < 0.0 && breaks[1] > 0.0) breaks.insert(breaks.begin() + 1, 0.0);
  auto inner = [&](double p) {
    const auto f = g.factors(p0, p);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      sum += quad::integrate([&](double q) { return std::sqrt(g.norm_squared(f, q)); }, breaks[i], breaks[i + 1], 15,
                             kGridTolerance)
                 .value;
    return sum;
  };
  return quad::integrate(inner, -inf, p0, 15, kGridTolerance).value +
         quad::integrate(inner, p0, inf, 15, kGridTolerance).value;
}

}  // namespace

double lemma1_integrand(const PotentialSpec& v, const PotentialSpec& w, double c, double p0, double p, double q) {
  check_lemma1_inputs(w, c);
  if (v.kind() == PotentialSpec::Kind::gaussian) return std::sqrt(GaussianLemma1(v, w, c).norm_squared(p0, p, q));
  const GridLemma1 g(v, w, c);
  return std::sqrt(g.norm_squared(g.factors(p0, p), q));
}

double lemma1_bound(const PotentialSpec& v, const PotentialSpec& w, double c, int nu, const RealVector& p0) {
  if (nu < 1 || nu > 3) throw std::invalid_argument("lemma1: nu must be 1, 2 or 3");
  if (p0.size() != nu) throw std::invalid_argument("lemma1: p0 must have nu components");
  if (nu == 1) return lemma1_bound_1d(v, w, c, p0(0));
  if (v.kind() != PotentialSpec::Kind::gaussian || w.kind() != PotentialSpec::Kind::gaussian)
    throw std::invalid_argument("lemma1: nu > 1 needs separable gaussian v and w");
  const auto unit_v = PotentialSpec::gaussian(v.width(), 1.0, v.gamma());
  const auto unit_w = PotentialSpec::gaussian(w.width(), 1.0, w.gamma());
  double out = v.strength() * w.strength();
  for (int j = 0; j < nu; ++j) out *= lemma1_bound_1d(unit_v, unit_w, c, p0(j));
  return out;
}

UniformityReport lemma1_uniformity(const PotentialSpec& v, const PotentialSpec& w, double c, int nu,
                                   std::span<const double> p0_values) {
  UniformityReport r;
  for (double p : p0_values) {
    RealVector p0 = RealVector::Zero(nu);
    p0(0) = p;
    r.p0.push_back(p);
    r.values.push_back(lemma1_bound(v, w, c, nu, p0));
  }
  if (!r.values.empty()) {
    const auto [lo, hi] = std::minmax_element(r.values.begin(), r.values.end());
    r.relative_spread = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
  }
  return r;
}

double cosine_basis(int n, double x) {
  if (n < 0) throw std::invalid_argument("cosine_basis: n must be >= 0");
  const double norm = 1.0 / std::sqrt(2.0 * kPi);
  return n == 0 ? norm : std::numbers::sqrt2 * norm * std::cos(n * x);
}

cplx cosine_overlap(int n, double p, double q) {
  if (n < 0) throw std::invalid_argument("cosine_overlap: n must be >= 0");
  const double norm = std::pow(kPi, -0.25);
  auto f = [&](double x) { return cosine_basis(n, x) * norm * std::exp(cplx{-0.5 * sq(x - q), p * x}); };
  return quad::integral(std::function<cplx(double)>(f), 0.0, 2.0 * kPi);
}

cplx cosine_overlap(std::span<const int> n, std::span<const double> p, std::span<const double> q) {
  if (n.size() != p.size() || n.size() != q.size() || n.empty())
    throw std::invalid_argument("cosine_overlap: component count mismatch");
  cplx out{1.0, 0.0};
  for (std::size_t j = 0; j < n.size(); ++j) out *= cosine_overlap(n[j], p[j], q[j]);
  return out;
}

Matrix cosine_gram(int n_max) {
  const auto n = static_cast<Eigen::Index>(n_max + 1);
  Matrix g(n, n);
  for (int i = 0; i <= n_max; ++i)
    for (int j = i; j <= n_max; ++j) {
      const double v =
          quad::integral([&](double x) { return cosine_basis(i, x) * cosine_basis(j, x); }, 0.0, 2.0 * kPi);
      g(i, j) = g(j, i) = v;
    }
  return g;
}

double smeared_gaussian(double width, double strength, double separation) {
  const double s2 = width * width;
  return 0.5 * kPi * strength * width / std::sqrt(s2 + 1.0) * std::exp(-sq(separation) / (s2 + 1.0));
}

std::vector<double> smear_potential(const PotentialSpec& v, std::span<const double> separations,
                                    SmearingCentres centres) {
  auto smeared = [&](double d) {
    if (v.kind() == PotentialSpec::Kind::gaussian && v.gamma() == 0.0) return smeared_gaussian(v.width(), v.strength(), d);
    // (sqrt(pi)/2) int du e^{-u^2} v(d + u), u beyond +-9 negligible.
    const double lo = std::max(-9.0, v.support_min() - d);
    const double hi = std::min(9.0, v.support_max() - d);
    if (!(hi > lo)) return 0.0;
    std::vector<double> breaks{lo, hi};
    if (v.kind() == PotentialSpec::Kind::grid)
      for (double x : v.grid_x())
        if (x - d > lo && x - d < hi) breaks.push_back(x - d);
    std::sort(breaks.begin(), breaks.end());
    return 0.5 * std::sqrt(kPi) * quad::integral([&](double u) { return std::exp(-u * u) * v(d + u); }, breaks);
  };
  std::vector<double> out;
  out.reserve(separations.size());
  if (centres == SmearingCentres::single) {
    const double level = smeared(0.0);
    out.assign(separations.size(), level);
    return out;
  }
  for (double d : separations) out.push_back(smeared(d));
  return out;
}

double cutoff_limit_weight() { return 2.0 * std::sqrt(kPi); }

std::vector<CutoffRow> cutoff_collapse_check(std::span<const double> gamma_sequence, double q,
                                             std::span<const double> x_grid, double pprime) {
  for (std::size_t i = 0; i < gamma_sequence.size(); ++i) {
    if (!(gamma_sequence[i] >= 0.0)) throw std::invalid_argument("cutoff_collapse_check: gamma must be >= 0");
    if (i > 0 && !(gamma_sequence[i] < gamma_sequence[i - 1]))
      throw std::invalid_argument("cutoff_collapse_check: gamma sequence must be strictly decreasing");
  }
  const double centres[] = {q - 1.0, q, q + 1.0};
  auto test_fn = [](double centre, double y) { return std::exp(-0.5 * sq(y - centre)); };
  auto limit = [&](double centre, double x) {
    return cutoff_limit_weight() * std::exp(-sq(x - q)) * test_fn(centre, x);
  };
  std::vector<CutoffRow> rows;
  for (double gamma : gamma_sequence) {
    CutoffRow row;
    row.gamma = gamma;
    for (double centre : centres)
      for (double x : x_grid) {
        cplx applied;
        if (gamma == 0.0) {
          applied = limit(centre, x);
        } else {
          const double pref = std::pow(kPi, -0.5) * std::sqrt(kPi / gamma) * std::exp(-0.5 * sq(x - q));
          auto f = [&](double y) {
            return pref * std::exp(cplx{-0.5 * sq(y - q) - sq(x - y) / (4.0 * gamma), pprime * (y - x)}) *
                   test_fn(centre, y);
          };
          const double half = 40.0 * std::sqrt(gamma);
          applied = quad::integral(std::function<cplx(double)>(f), x - half, x) +
                    quad::integral(std::function<cplx(double)>(f), x, x + half);
        }
        row.distance = std::max(row.distance, std::abs(applied - limit(centre, x)));
        row.magnitude = std::max(row.magnitude, std::abs(applied));
      }
    rows.push_back(row);
  }
  return rows;
}

PositivityCheck positivity_decomposition_check(const fock::ModeVector& h, const fock::ModeVector& g, double alpha) {
  if (h.size() != g.size()) throw std::invalid_argument("positivity_decomposition_check: length mismatch");
  using fock::smeared_annihilator;
  using fock::smeared_creator;
  const fock::ModeVector sum{h.coefficients + g.coefficients};
  const fock::ModeVector diff{h.coefficients - g.coefficients};
  const auto cross = smeared_creator(h) * smeared_annihilator(g) + smeared_creator(g) * smeared_annihilator(h);
  const auto lhs = smeared_creator(sum) * smeared_annihilator(sum) - smeared_creator(diff) * smeared_annihilator(diff);
  PositivityCheck out;
  out.identity_residual = max_abs(lhs.matrix() - 2.0 * cross.matrix());
  const auto op = smeared_creator(h) * smeared_annihilator(h) + cplx{alpha} * cross;
  out.min_eigenvalue = hermitian_spectrum(0.5 * (op.matrix() + op.matrix().adjoint())).values.minCoeff();
  return out;
}

double repulsive_quadratic_form(const PotentialSpec& v, double f_width,
                                const std::function<double(double, double)>& rho_pair, PotentialClass cls,
                                double box) {
  if (!(f_width > 0.0)) throw std::invalid_argument("repulsive_quadratic_form: f_width must be positive");
  if (!(box > 0.0)) throw std::invalid_argument("repulsive_quadratic_form: box must be positive");
  if (cls == PotentialClass::repulsive) {
    if (v.minimum() < 0.0) throw std::invalid_argument("repulsive_quadratic_form: v is negative somewhere (not repulsive)");
    for (int i = 0; i <= 48; ++i)
      for (int j = 0; j <= 48; ++j) {
        const double x = -box + 2.0 * box * i / 48.0, y = -box + 2.0 * box * j / 48.0;
        if (rho_pair(x, y) < 0.0) throw std::invalid_argument("repulsive_quadratic_form: pair density is negative");
      }
  } else if (v.kind() != PotentialSpec::Kind::gaussian || v.strength() < 0.0) {
    throw std::invalid_argument("repulsive_quadratic_form: positive type needs a nonnegative gaussian v");
  }
  const double norm = 1.0 / (std::sqrt(kPi) * f_width);
  auto inner = [&](double y) {
    const double f2 = norm * std::exp(-sq(y / f_width));
    return f2 * quad::integral([&](double x) { return rho_pair(x, y) * v(x - y); }, std::vector<double>{-box, y, box});
  };
  return quad::integral(inner, std::vector<double>{-box, 0.0, box});
}

}  // namespace kmslab::phase
