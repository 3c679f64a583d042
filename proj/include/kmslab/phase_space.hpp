#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "kmslab/fock.hpp"
#include "kmslab/linalg.hpp"

namespace kmslab::phase {

// Coherent states are phi_{p,q}(x) = pi^{-nu/4} exp(-(x - q)^2/2 + i p x).

/// Samples of phi_{p,q} on `x_grid` (nu = 1). Throws std::invalid_argument when
/// the grid does not reach q +- 6 or the trapezoidal norm differs from 1 by
/// more than 1e-4.
std::vector<cplx> coherent_wavefunction(double p, double q, std::span<const double> x_grid);

/// <p,q|p',q'> = exp(-(q-q')^2/4 - (p-p')^2/4 + i (p'-p)(q+q')/2) per component.
cplx coherent_overlap(double p, double q, double pp, double qq);
cplx coherent_overlap(const RealVector& p, const RealVector& q, const RealVector& pp, const RealVector& qq);

struct GaussKernelParams {
  RealVector p0;
  RealVector pprime;
  RealVector qprime;
  double c = 1.0;
  int nu = 1;

  void validate() const;
};

/// c(nu) = pi^{-nu/2}: the normalization putting the kernel maximum at
/// g(c) = (1 + c)^{-nu/2}.
double kernel_normalization(int nu);
double kernel_g(double c, int nu);

/// Closed form of c(nu) int dr exp(-(r-p')^2 + i q' r - c (r-p0)^2), per component
///   g(c) exp(-c/(1+c) (p0-p')^2 - q'^2/(4(1+c)) + i q' (p' + c p0)/(1+c)).
cplx anticommutator_kernel(const GaussKernelParams& k);

/// The same integral by adaptive quadrature (nu = 1 components multiplied).
cplx anticommutator_kernel_quadrature(const GaussKernelParams& k);

/// The shorter expression g(c) exp(-c/(1+c)(p0-p')^2 + i q'(p'+p0)), kept for
/// comparison with the closed form.
cplx anticommutator_kernel_short_form(const GaussKernelParams& k);

/// Separable interaction profile: gaussian strength exp(-u^2/width^2), or a
/// sampled table (zero outside, monotone cubic interpolation inside). The
/// momentum cutoff multiplies either by exp(-gamma u^2).
class PotentialSpec {
 public:
  enum class Kind { gaussian, grid };

  static PotentialSpec gaussian(double width, double strength, double gamma = 0.0);
  static PotentialSpec grid(std::vector<double> x, std::vector<double> v, double gamma = 0.0);
  /// Two whitespace separated columns (separation, value); '#' starts a comment.
  static PotentialSpec read_grid(const std::string& path, double gamma = 0.0);

  Kind kind() const { return kind_; }
  double width() const { return width_; }
  double strength() const { return strength_; }
  double gamma() const { return gamma_; }
  const std::vector<double>& grid_x() const { return grid_x_; }
  const std::vector<double>& grid_v() const { return grid_v_; }

  double operator()(double u) const;
  PotentialSpec scaled(double factor) const;
  /// Smallest and largest separation where the profile can be nonzero.
  double support_min() const;
  double support_max() const;
  /// min over the profile (exact for gaussian, over samples for grid).
  double minimum() const;

 private:
  Kind kind_ = Kind::gaussian;
  double width_ = 1.0;
  double strength_ = 0.0;
  double gamma_ = 0.0;
  std::vector<double> grid_x_, grid_v_;
  std::shared_ptr<const std::function<double(double)>> interp_;
};

/// || g_{p0,p,q} ||_2 with
///   g(r) = int dp'dq' v(q - q') w(p - p') K(p0, q', p', c) exp(-(r - p')^2 - i q' r),
/// nu = 1, w gaussian, v gaussian or grid.
double lemma1_integrand(const PotentialSpec& v, const PotentialSpec& w, double c, double p0, double p, double q);

/// int dp dq ||g_{p0,p,q}||_2. For nu > 1 the inputs must be gaussian and the
/// value is the product of the one-dimensional integrals (strengths counted
/// once). Throws quad::NumericalError if the nested quadrature fails.
double lemma1_bound(const PotentialSpec& v, const PotentialSpec& w, double c, int nu, const RealVector& p0);

struct UniformityReport {
  std::vector<double> p0;
  std::vector<double> values;
  /// (max - min) / max.
  double relative_spread = 0.0;
};

/// Evaluates lemma1_bound along the first momentum component.
UniformityReport lemma1_uniformity(const PotentialSpec& v, const PotentialSpec& w, double c, int nu,
                                   std::span<const double> p0_values);

/// Cosine basis on the cell [0, 2pi]: e_0 = (2pi)^{-1/2}, e_n = sqrt(2) cos(n x)/(2pi)^{1/2}.
double cosine_basis(int n, double x);

/// <n|p,q> = int_cell e_n(x) phi_{p,q}(x) dx (product over components for nu > 1).
cplx cosine_overlap(std::span<const int> n, std::span<const double> p, std::span<const double> q);
cplx cosine_overlap(int n, double p, double q);

/// Gram matrix of e_0..e_{n_max} by quadrature.
Matrix cosine_gram(int n_max);

enum class TwoPointModel {
  /// Translation invariant quasifree: rho = n(P) with n(k) = wbar(k, 0).
  quasifree,
  /// rho = int dp dq / (2 pi) wbar(p, q) |p,q><p,q|.
  diagonal,
};

struct LocalSymbol {
  /// <n|rho|n'> for n, n' = 0..n_max.
  Matrix rho;
  /// Eigenvalues, descending.
  std::vector<double> eigenvalues;
  /// diagonal_tail[K] = sum_{n > K} <n|rho|n>.
  std::vector<double> diagonal_tail;
};

/// Compression of the one-particle density to the cosine basis of the cell
/// (nu = 1). Throws std::invalid_argument when wbar fails the p^{-4} decay
/// probe (sup_q p^4 wbar at p = 256 more than twice its value at p = 8) or
/// takes values outside [0, 1].
LocalSymbol local_symbol_from_twopoint(const std::function<double(double, double)>& wbar, int n_max, int nu,
                                       TwoPointModel model);

enum class SmearingCentres {
  /// exp(-2(q-x)^2 - 2(q'-x')^2): depends on x - x'.
  pair,
  /// exp(-2(q-x)^2 - 2(q'-x)^2) as written with both factors at x.
  single,
};

/// tilde v(D) = int dq dq' exp(-2(q-x)^2 - 2(q'-x')^2) v(q - q') at D = x - x'.
/// Reduces to (sqrt(pi)/2) int du exp(-u^2) v(D + u); for gaussian v of width s
/// and strength S: (pi/2) S s / sqrt(s^2 + 1) exp(-D^2/(s^2 + 1)).
std::vector<double> smear_potential(const PotentialSpec& v, std::span<const double> separations,
                                    SmearingCentres centres = SmearingCentres::pair);

/// Closed form for gaussian v.
double smeared_gaussian(double width, double strength, double separation);

struct CutoffRow {
  double gamma = 0.0;
  /// sup over x_grid and the test functions of |(O_gamma t)(x) - (O_0 t)(x)|.
  double distance = 0.0;
  /// sup |(O_gamma t)(x)|.
  double magnitude = 0.0;
};

/// Kernel of int dp w_gamma(p - p') a^*_{pq} a_{pq}:
///   O_gamma(x, y) = pi^{-1/2} e^{-(x-q)^2/2 - (y-q)^2/2} sqrt(pi/gamma) e^{i p'(y-x)} e^{-(x-y)^2/(4 gamma)},
/// whose gamma -> 0 limit is 2 sqrt(pi) e^{-(q-x)^2} delta(x - y). Applied to
/// unit gaussians centred at q - 1, q, q + 1 and compared on x_grid.
/// gamma_sequence must be strictly decreasing and nonnegative.
std::vector<CutoffRow> cutoff_collapse_check(std::span<const double> gamma_sequence, double q,
                                             std::span<const double> x_grid, double pprime = 0.0);

/// 2 sqrt(pi) for nu = 1: the weight of the limit multiplication kernel.
double cutoff_limit_weight();

struct PositivityCheck {
  /// max |a*(h+g)a(h+g) - a*(h-g)a(h-g) - 2(a*(h)a(g) + a*(g)a(h))|.
  double identity_residual = 0.0;
  /// Smallest eigenvalue of a*(h)a(h) + alpha (a*(h)a(g) + a*(g)a(h)).
  double min_eigenvalue = 0.0;
};

PositivityCheck positivity_decomposition_check(const fock::ModeVector& h, const fock::ModeVector& g, double alpha);

enum class PotentialClass { repulsive, positive_type };

/// int dx dy rho(x, y) v(x - y) f^2(y) on [-box, box]^2 with
/// f^2(y) = exp(-y^2/width^2)/(sqrt(pi) width). In the repulsive class v and
/// rho must be nonnegative (checked on a sample grid, std::invalid_argument
/// otherwise); in the positive-type class v must be gaussian and rho may change
/// sign.
double repulsive_quadratic_form(const PotentialSpec& v, double f_width,
                                const std::function<double(double, double)>& rho_pair, PotentialClass cls,
                                double box = 12.0);

}  // namespace kmslab::phase
