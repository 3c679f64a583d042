#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kmslab/csv.hpp"
#include "kmslab/linalg.hpp"

namespace kmslab::decay {

/// Occupation bound for an approximate eigenoperator A_lambda of the derivation,
/// -i delta(A) = -lambda A + B with ||B|| <= h. With w(A^* A) = 1/y the KMS
/// inequality forces
///   f(y) = (lambda - shift) - h sqrt(y) - log y <= 0,
/// so y >= y_min (the unique root) and the occupation is at most 1 / y_min.
struct DecayQuery {
  double lambda = 0.0;
  double h = 0.0;
  double shift = 0.0;
  double y_min = 0.0;
  /// min(1, 1 / y_min).
  double w_bound = 1.0;
  /// y_min < 1: the bound says nothing beyond w <= 1.
  bool vacuous = false;
};

/// (lambda - shift) - h sqrt(y) - log y.
double decay_residual(double lambda, double h, double shift, double y);

/// Unique positive root of decay_residual in y. Bisection in log y on a
/// provable bracket, then Newton polish; relative accuracy 1e-12.
/// Throws std::domain_error when lambda - shift <= 0 (no bound) and
/// std::invalid_argument for h < 0.
double solve_y_min(double lambda, double h, double shift = 0.0);

DecayQuery decay_query(double lambda, double h, double shift = 0.0);

/// One row per grid point; grid must be strictly increasing with every entry
/// above `shift`. h is evaluated pointwise as h_of(lambda).
std::vector<DecayQuery> bounded_occupation_curve(std::span<const double> lambda_grid,
                                                 const std::function<double(double)>& h_of, double shift = 0.0);

/// Columns: lambda, h, shift, y_min, w_bound, vacuous_flag.
CsvTable decay_table(std::span<const DecayQuery> rows);

/// ||exp(sign H/2) V exp(-sign H/2)|| evaluated in the eigenbasis of H, so only
/// energy differences are exponentiated.
double sandwich_norm(const Matrix& v, const Matrix& h, int sign);

/// h(lambda) = c for all lambda.
struct BoundedProfile {
  double c = 0.0;
};
/// h(lambda) = exp(-d lambda).
struct ExponentialProfile {
  double d = 0.0;
};
using HProfile = std::variant<BoundedProfile, ExponentialProfile>;

double profile_value(const HProfile& profile, double lambda);

enum class DecayLawKind { quadratic_ratio, exponential };

/// Asymptotic descriptor of w_bound(lambda).
///  - bounded(c): the claimed law is w lambda^2 / (c^2 + 1) -> 0.
///  - exponential(d): claimed w ~ exp(-d lambda) for 0 < d < 1 and
///    exp(-lambda) for d >= 1.
/// `exact_*` records what the root of decay_residual actually does: for bounded
/// c > 0, y_min ~ lambda^2 / c^2 so the ratio tends to c^2 / (c^2 + 1); for
/// exponential d the slope is -min(2d, 1).
struct DecayLaw {
  DecayLawKind kind = DecayLawKind::exponential;
  double claimed_slope = 0.0;
  double exact_slope = 0.0;
  double claimed_ratio_limit = 0.0;
  double exact_ratio_limit = 0.0;
  std::string description;
};

/// Throws std::invalid_argument for exponential profiles with d <= 0 or bounded
/// profiles with c < 0.
DecayLaw asymptotic_rate(const HProfile& profile);

struct DecayFit {
  /// Least-squares slope of log w_bound against lambda.
  double slope = 0.0;
  /// w_bound lambda^2 / (h^2 + 1) at the last grid point.
  double final_ratio = 0.0;
  std::vector<DecayQuery> rows;
};

DecayFit fit_decay(const HProfile& profile, std::span<const double> lambda_grid);

}  // namespace kmslab::decay
