#include "kmslab/decay.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kmslab::decay {

double decay_residual(double lambda, double h, double shift, double y) {
  return (lambda - shift) - h * std::sqrt(y) - std::log(y);
}

double solve_y_min(double lambda, double h, double shift) {
  if (!(h >= 0.0) || !std::isfinite(h)) throw std::invalid_argument("solve_y_min: h must be finite and >= 0");
  const double reach = lambda - shift;
  if (!(reach > 0.0)) throw std::domain_error("solve_y_min: lambda - shift <= 0, no occupation bound");
  if (h == 0.0) return std::exp(reach);

  // g(t) = reach - h e^{t/2} - t is strictly decreasing in t = log y.
  // g(min(0, reach - h)) >= 0 and g(reach) <= 0.
  auto g = [&](double t) { return reach - h * std::exp(0.5 * t) - t; };
  double lo = std::min(0.0, reach - h);
  double hi = reach;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) >= 0.0 ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 20; ++it) {
    const double gp = -0.5 * h * std::exp(0.5 * t) - 1.0;
    const double step = g(t) / gp;
    const double next = t - step;
    if (next < lo || next > hi) break;
    t = next;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(t))) break;
  }
  return std::exp(t);
}

DecayQuery decay_query(double lambda, double h, double shift) {
  DecayQuery q;
  q.lambda = lambda;
  q.h = h;
  q.shift = shift;
  q.y_min = solve_y_min(lambda, h, shift);
  q.vacuous = q.y_min < 1.0;
  q.w_bound = q.vacuous ? 1.0 : 1.0 / q.y_min;
  return q;
}

std::vector<DecayQuery> bounded_occupation_curve(std::span<const double> lambda_grid,
                                                 const std::function<double(double)>& h_of, double shift) {
  std::vector<DecayQuery> out;
  out.reserve(lambda_grid.size());
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    const double lambda = lambda_grid[i];
    if (!(lambda > shift)) throw std::invalid_argument("bounded_occupation_curve: grid entry not above shift");
    if (i > 0 && !(lambda > lambda_grid[i - 1]))
      throw std::invalid_argument("bounded_occupation_curve: grid not strictly increasing");
    out.push_back(decay_query(lambda, h_of(lambda), shift));
  }
  return out;
}

CsvTable decay_table(std::span<const DecayQuery> rows) {
  CsvTable t({"lambda", "h", "shift", "y_min", "w_bound", "vacuous_flag"});
  for (const auto& r : rows)
    t.add_row({format_double(r.lambda), format_double(r.h), format_double(r.shift), format_double(r.y_min),
               format_double(r.w_bound), r.vacuous ? "1" : "0"});
  return t;
}

double sandwich_norm(const Matrix& v, const Matrix& h, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sandwich_norm: sign must be +1 or -1");
  if (v.rows() != h.rows() || v.cols() != h.cols()) throw std::invalid_argument("sandwich_norm: dimension mismatch");
  if (hermiticity_defect(h) > 1e-10 * std::max(1.0, max_abs(h)))
    throw std::invalid_argument("sandwich_norm: H is not Hermitian");
  const auto spec = hermitian_spectrum(0.5 * (h + h.adjoint()));
  Matrix w = spec.vectors.adjoint() * v * spec.vectors;
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      w(i, j) *= std::exp(0.5 * sign * (spec.values(i) - spec.values(j)));
  return operator_norm(w);
}

double profile_value(const HProfile& profile, double lambda) {
  if (const auto* b = std::get_if<BoundedProfile>(&profile)) return b->c;
  return std::exp(-std::get<ExponentialProfile>(profile).d * lambda);
}

DecayLaw asymptotic_rate(const HProfile& profile) {
  DecayLaw law;
  std::ostringstream os;
  if (const auto* b = std::get_if<BoundedProfile>(&profile)) {
    if (!(b->c >= 0.0)) throw std::invalid_argument("asymptotic_rate: bounded profile needs c >= 0");
    const double c2 = b->c * b->c;
    law.kind = DecayLawKind::quadratic_ratio;
    law.claimed_ratio_limit = 0.0;
    law.exact_ratio_limit = c2 / (c2 + 1.0);
    law.claimed_slope = law.exact_slope = (b->c == 0.0) ? -1.0 : 0.0;
    os << "bounded h = " << b->c << ": w lambda^2/(h^2+1) -> 0 claimed, root gives -> " << law.exact_ratio_limit;
  } else {
    const double d = std::get<ExponentialProfile>(profile).d;
    if (!(d > 0.0)) throw std::invalid_argument("asymptotic_rate: exponential profile needs d > 0");
    law.kind = DecayLawKind::exponential;
    law.claimed_slope = d < 1.0 ? -d : -1.0;
    law.exact_slope = -std::min(2.0 * d, 1.0);
    os << "h = exp(-" << d << " lambda): claimed w ~ exp(" << law.claimed_slope << " lambda), root gives exp("
       << law.exact_slope << " lambda)";
  }
  law.description = os.str();
  return law;
}

DecayFit fit_decay(const HProfile& profile, std::span<const double> lambda_grid) {
  DecayFit fit;
  fit.rows = bounded_occupation_curve(lambda_grid, [&](double l) { return profile_value(profile, l); });
  const auto n = static_cast<double>(fit.rows.size());
  if (fit.rows.size() < 2) throw std::invalid_argument("fit_decay: need at least two grid points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : fit.rows) {
    const double x = r.lambda, y = std::log(r.w_bound);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const auto& last = fit.rows.back();
  fit.final_ratio = last.w_bound * last.lambda * last.lambda / (last.h * last.h + 1.0);
  return fit;
}

}  // namespace kmslab::decay
