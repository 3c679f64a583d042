#include "kmslab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "kmslab/decay.hpp"
#include "kmslab/fock.hpp"
#include "kmslab/kms.hpp"
#include "kmslab/phase_space.hpp"
#include "kmslab/quasifree.hpp"
#include "kmslab/random.hpp"
#include "kmslab/toy_chain.hpp"

namespace kmslab::lab {

namespace {

using cfg::ConfigError;
using cfg::Parameters;

// Per-task seed, independent of scheduling.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t task) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (task + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Runs body(i) for i in [0, n) on up to `jobs` threads. The exception of the
// lowest failing index is rethrown.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(jobs, 1u), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex m;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string fmt(double x) { return format_double(x); }
std::string fmt(std::size_t x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "1" : "0"; }

Check at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}
Check at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value >= threshold};
}
Check flag(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, ok}; }

std::size_t positive_count(Parameters& p, const std::string& key, long fallback) {
  const long v = p.integer(key, fallback);
  if (v <= 0) throw ConfigError(key + " must be positive");
  return static_cast<std::size_t>(v);
}

// ---------------------------------------------------------------------------

ExperimentResult kms_gap_experiment(Parameters& p, std::uint64_t seed, unsigned jobs) {
  const auto modes = p.list("modes", {2, 3, 4});
  const auto betas = p.list("beta", {0.2, 1, 5});
  const auto hamiltonians = positive_count(p, "hamiltonians", 20);
  const auto operators = positive_count(p, "operators", 50);
  const double mu = p.real("mu", 0.0);
  p.finish();
  for (double m : modes)
    if (m != std::floor(m) || m < 1 || m > 8) throw ConfigError("modes must be integers in [1, 8]");
  for (double b : betas)
    if (!(b >= 0.0)) throw ConfigError("beta must be >= 0");

  struct Task {
    std::size_t modes;
    double beta;
    std::size_t h;
  };
  std::vector<Task> tasks;
  for (double m : modes)
    for (double b : betas)
      for (std::size_t h = 0; h < hamiltonians; ++h) tasks.push_back({static_cast<std::size_t>(m), b, h});

  struct Row {
    double min_gap = 0.0, mean_gap = 0.0;
  };
  std::vector<Row> rows(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) {
    const auto& t = tasks[i];
    Rng rng(stream_seed(seed, i));
    const auto dim = static_cast<Eigen::Index>(fock::fock_dimension(t.modes));
    const auto ens = fock::gibbs_state(fock::FockOperator(t.modes, rng.hermitian(dim)), t.beta, mu);
    double lo = INFINITY, sum = 0.0;
    for (std::size_t k = 0; k < operators; ++k) {
      const auto r = kms::kms_gap(ens, rng.ginibre(dim));
      lo = std::min(lo, r.gap);
      sum += r.gap;
    }
    rows[i] = {lo, sum / static_cast<double>(operators)};
  });

  ExperimentResult out;
  out.table = CsvTable({"modes", "beta", "hamiltonian", "min_gap", "mean_gap"});
  double worst = INFINITY;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    out.table.add_row({fmt(tasks[i].modes), fmt(tasks[i].beta), fmt(tasks[i].h), fmt(rows[i].min_gap),
                       fmt(rows[i].mean_gap)});
    worst = std::min(worst, rows[i].min_gap);
  }
  out.checks.push_back(at_least("min_gap", worst, -kms::kGapTolerance));
  out.metrics["samples"] = static_cast<double>(tasks.size() * operators);
  return out;
}

ExperimentResult fermi_dirac_experiment(Parameters& p) {
  const auto p0 = p.list("p0", {0, 0.5, 1, 2});
  const double mu = p.real("mu", 0.0);
  const auto b = p.list("b", {1, 0.5, 0.25, 0.125, 0.0625});
  p.finish();

  ExperimentResult out;
  out.table = CsvTable({"p0", "mu", "w", "w_gibbs", "residual", "w_lower", "w_upper", "width"});
  const auto a = fock::annihilator(0, 1);
  const auto n = fock::creator(0, 1) * a;
  double worst = 0.0;
  bool monotone = true;
  for (double x : p0) {
    const double w = kms::fermi_function(x * x + mu);
    const auto ens = fock::gibbs_state(cplx{x * x} * n, 1.0, mu);
    const double wg = fock::expectation(ens.rho, n).real();
    worst = std::max(worst, std::abs(w - wg));
    try {
      kms::sandwich_limit_check(x, mu, b);
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const std::invalid_argument*>(&e)) throw;
      monotone = false;
    }
    const auto s = kms::fermi_dirac_sandwich(x, mu, b.back());
    out.table.add_row({x, mu, w, wg, std::abs(w - wg), s.w_lower, s.w_upper, s.width()});
  }
  out.checks.push_back(at_most("gibbs_residual", worst, 1e-12));
  out.checks.push_back(flag("sandwich_monotone", monotone));
  return out;
}

ExperimentResult decay_sweep_experiment(Parameters& p) {
  const auto lambda = p.list("lambda", {5, 10, 15, 20, 25, 30, 35, 40, 45, 50});
  const std::string profile_name = p.text("profile", "bounded");
  const double shift = p.real("shift", 0.0);
  decay::HProfile profile;
  double ratio_target = 0.0, slope_tolerance = 0.0;
  if (profile_name == "bounded") {
    profile = decay::BoundedProfile{p.real("h", 1.0)};
    ratio_target = p.real("ratio_target", 0.01);
  } else if (profile_name == "exponential") {
    profile = decay::ExponentialProfile{p.real("d", 0.5)};
    slope_tolerance = p.real("slope_tolerance", 0.05);
  } else {
    throw ConfigError("profile must be bounded or exponential");
  }
  p.finish();
  if (lambda.size() < 2) throw ConfigError("lambda needs at least two points");

  const auto law = decay::asymptotic_rate(profile);
  const auto rows = decay::bounded_occupation_curve(lambda, [&](double l) { return decay::profile_value(profile, l); },
                                                    shift);
  ExperimentResult out;
  out.table = CsvTable({"lambda", "h", "y_min", "w_bound", "ratio", "residual"});
  double worst_residual = 0.0;
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double residual = std::abs(decay::decay_residual(r.lambda, r.h, r.shift, r.y_min));
    const double ratio = r.w_bound * r.lambda * r.lambda / (r.h * r.h + 1.0);
    worst_residual = std::max(worst_residual, residual);
    if (i > 0 && r.w_bound > rows[i - 1].w_bound) monotone = false;
    out.table.add_row({r.lambda, r.h, r.y_min, r.w_bound, ratio, residual});
  }
  out.checks.push_back(at_most("solver_residual", worst_residual, 1e-10));
  out.checks.push_back(flag("w_bound_monotone", monotone));
  if (std::holds_alternative<decay::BoundedProfile>(profile)) {
    const auto& last = rows.back();
    const double ratio = last.w_bound * last.lambda * last.lambda / (last.h * last.h + 1.0);
    out.checks.push_back({"final_ratio", ratio, ratio_target, ratio < ratio_target});
    out.metrics["exact_ratio_limit"] = law.exact_ratio_limit;
  } else {
    const auto fit = decay::fit_decay(profile, lambda);
    out.checks.push_back(at_most("slope_deviation", std::abs(fit.slope - law.claimed_slope), slope_tolerance));
    out.metrics["fitted_slope"] = fit.slope;
    out.metrics["claimed_slope"] = law.claimed_slope;
    out.metrics["exact_slope"] = law.exact_slope;
  }
  return out;
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

chain::CouplingTensor parse_coupling(const std::vector<std::pair<std::string, std::string>>& lines, std::size_t d) {
  chain::CouplingTensor h(d);
  for (const auto& [key, value] : lines) {
    std::istringstream ks(key);
    long idx[4];
    for (auto& i : idx)
      if (!(ks >> i) || i < 0 || static_cast<std::size_t>(i) >= d)
        throw ConfigError("coupling key must be four indices below d: '" + key + "'");
    std::string rest;
    if (ks >> rest) throw ConfigError("coupling key must be four indices: '" + key + "'");
    std::istringstream vs(value);
    std::vector<double> parts;
    std::string tok;
    while (vs >> tok) parts.push_back(cfg::parse_real(tok));
    if (parts.empty() || parts.size() > 2) throw ConfigError("coupling value must be 're [im]': '" + value + "'");
    h(static_cast<std::size_t>(idx[0]), static_cast<std::size_t>(idx[1]), static_cast<std::size_t>(idx[2]),
      static_cast<std::size_t>(idx[3])) = {parts[0], parts.size() > 1 ? parts[1] : 0.0};
  }
  return h;
}

ExperimentResult toy_chain_experiment(Parameters& p, const cfg::ExperimentConfig& config, std::uint64_t seed) {
  chain::ToyChainSpec spec;
  spec.sites = positive_count(p, "sites", 3);
  spec.d = positive_count(p, "d", 4);
  spec.beta = p.real("beta", 1.0);
  const double alpha = p.real("alpha", 0.0);
  if (config.coupling.empty()) {
    const double scale = p.real("coupling_scale", 0.02);
    Rng rng(stream_seed(seed, 0));
    spec.coupling = random_coupling(rng, spec.d, scale);
  } else {
    spec.coupling = parse_coupling(config.coupling, spec.d);
  }
  std::vector<std::size_t> windows;
  for (double w : p.list("windows", {1, 2})) {
    if (w != std::floor(w) || w < 1) throw ConfigError("windows must be positive integers");
    windows.push_back(static_cast<std::size_t>(w));
  }
  p.finish();
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const auto bounds = chain::occupation_vs_bound(spec);
  const auto profile = chain::occupation_profile(spec);
  ExperimentResult out;
  out.table = CsvTable({"k", "occupation", "w_bound", "has_bound", "holds", "derivative_residual"});
  bool holds = true;
  double worst_derivative = 0.0;
  for (const auto& row : bounds) {
    const auto deriv = chain::local_derivative(spec, row.k);
    worst_derivative = std::max(worst_derivative, deriv.residual);
    holds = holds && row.holds;
    out.table.add_row({fmt(row.k), fmt(row.occupation), fmt(row.query.w_bound), fmt(row.has_bound), fmt(row.holds),
                       fmt(deriv.residual)});
  }
  double worst_gap = INFINITY;
  for (const auto& g : chain::chain_kms_gaps(spec)) worst_gap = std::min(worst_gap, g.gap);
  const auto entropy = chain::local_entropy_report(spec, windows);
  bool subadditive = true;
  for (const auto& s : entropy.subadditivity) subadditive = subadditive && s.holds;

  out.checks.push_back(flag("occupation_below_bound", holds));
  out.checks.push_back(at_most("derivative_residual", worst_derivative, 1e-10));
  out.checks.push_back(at_most("translation_defect", profile.translation_defect, 1e-10));
  out.checks.push_back(flag("subadditivity", subadditive));
  out.checks.push_back(at_least("min_kms_gap", worst_gap, -kms::kGapTolerance));
  const auto cond = chain::coupling_condition(spec.coupling, alpha);
  out.metrics["c_star"] = cond.c_star;
  out.metrics["dimension"] = static_cast<double>(spec.dimension());
  return out;
}

ExperimentResult lemma1_experiment(Parameters& p, unsigned jobs) {
  const auto p0 = p.list("p0", {0, 5, 20});
  const double c = p.real("c", 1.0);
  const auto nu = static_cast<int>(positive_count(p, "nu", 1));
  const double gamma = p.real("gamma", 0.0);
  const double w_width = p.real("w_width", 1.0);
  const double w_strength = p.real("w_strength", 1.0);
  const auto file = p.optional_text("potential_file");
  phase::PotentialSpec v = phase::PotentialSpec::gaussian(1.0, 1.0);
  if (file) {
    v = phase::PotentialSpec::read_grid(*file);
  } else {
    const double width = p.real("v_width", 1.0);
    const double strength = p.real("v_strength", 1.0);
    v = phase::PotentialSpec::gaussian(width, strength);
  }
  const double tolerance = p.real("tolerance", 1e-6);
  p.finish();
  const auto w = phase::PotentialSpec::gaussian(w_width, w_strength, gamma);

  std::vector<double> values(p0.size());
  parallel_for(p0.size(), jobs, [&](std::size_t i) {
    RealVector q = RealVector::Zero(nu);
    q(0) = p0[i];
    values[i] = phase::lemma1_bound(v, w, c, nu, q);
  });
  ExperimentResult out;
  out.table = CsvTable({"p0", "bound"});
  for (std::size_t i = 0; i < p0.size(); ++i) out.table.add_row({p0[i], values[i]});
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double spread = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
  out.checks.push_back(at_most("relative_spread", spread, tolerance));
  return out;
}

ExperimentResult cutoff_experiment(Parameters& p) {
  const auto gamma = p.list("gamma", {0.5, 0.25, 0.125});
  const double q = p.real("q", 0.0);
  const double pprime = p.real("pprime", 0.0);
  const auto x = p.list("x", cfg::parse_list("-4:4:0.25"));
  p.finish();
  const auto rows = phase::cutoff_collapse_check(gamma, q, x, pprime);
  ExperimentResult out;
  out.table = CsvTable({"gamma", "distance", "magnitude"});
  bool decreasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.table.add_row({rows[i].gamma, rows[i].distance, rows[i].magnitude});
    if (i > 0 && !(rows[i].distance < rows[i - 1].distance)) decreasing = false;
  }
  out.checks.push_back(flag("distance_strictly_decreasing", decreasing));
  out.metrics["limit_weight"] = phase::cutoff_limit_weight();
  return out;
}

Matrix random_symbol(Rng& rng, Eigen::Index m) {
  Matrix d = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) d(i, i) = rng.uniform();
  const Matrix u = rng.unitary(m);
  const Matrix r = u * d * u.adjoint();
  return 0.5 * (r + r.adjoint());
}

ExperimentResult entropy_dominance_experiment(Parameters& p, std::uint64_t seed, unsigned jobs) {
  const auto states = positive_count(p, "states", 1000);
  const auto modes = positive_count(p, "modes", 3);
  p.finish();
  if (modes > 6) throw ConfigError("modes must be at most 6");

  struct Row {
    qf::DominanceReport rep;
    double formula_residual = 0.0;
  };
  std::vector<Row> rows(states);
  const auto dim = static_cast<Eigen::Index>(fock::fock_dimension(modes));
  parallel_for(states, jobs, [&](std::size_t i) {
    Rng rng(stream_seed(seed, i));
    const qf::QuasifreeSymbol r(random_symbol(rng, static_cast<Eigen::Index>(modes)));
    const Matrix rho = rng.density_matrix(dim);
    rows[i].rep = qf::entropy_dominance_check(rho, r);
    rows[i].formula_residual =
        std::abs(qf::binary_entropy_sum(r) - von_neumann_entropy(qf::quasifree_density_matrix(r)));
  });
  ExperimentResult out;
  out.table = CsvTable({"state", "entropy", "pinched_entropy", "relative", "identity_residual", "formula_residual"});
  std::size_t dominated = 0;
  double worst_identity = 0.0, worst_formula = 0.0;
  for (std::size_t i = 0; i < states; ++i) {
    const auto& r = rows[i];
    out.table.add_row({fmt(i), fmt(r.rep.entropy), fmt(r.rep.pinched_entropy), fmt(r.rep.relative),
                       fmt(r.rep.identity_residual), fmt(r.formula_residual)});
    dominated += r.rep.dominated;
    worst_identity = std::max(worst_identity, r.rep.identity_residual);
    worst_formula = std::max(worst_formula, r.formula_residual);
  }
  out.checks.push_back({"dominated_fraction", static_cast<double>(dominated) / static_cast<double>(states), 1.0,
                        dominated == states});
  out.checks.push_back(at_most("identity_residual", worst_identity, 1e-9));
  out.checks.push_back(at_most("formula_residual", worst_formula, 1e-10));
  return out;
}

ExperimentResult certificate_experiment(Parameters& p) {
  const std::string source = p.text("source", "fermi-dirac");
  const double epsilon = p.real("epsilon", 1.0);
  const double c = p.real("c", 1.0);
  Matrix symbol;
  if (source == "file") {
    const auto path = p.optional_text("symbol_file");
    if (!path) throw ConfigError("source = file needs symbol_file");
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open symbol file " + *path);
    symbol = qf::read_symbol(in);
  } else {
    const auto n_max = static_cast<int>(p.integer("n_max", 20));
    if (n_max < 0) throw ConfigError("n_max must be >= 0");
    if (source == "fermi-dirac") {
      const double mu = p.real("mu", 0.0);
      const std::string model = p.text("model", "quasifree");
      phase::TwoPointModel m;
      if (model == "quasifree")
        m = phase::TwoPointModel::quasifree;
      else if (model == "diagonal")
        m = phase::TwoPointModel::diagonal;
      else
        throw ConfigError("model must be quasifree or diagonal");
      auto wbar = [mu](double k, double) { return kms::fermi_function(k * k + mu); };
      symbol = phase::local_symbol_from_twopoint(wbar, n_max, 1, m).rho;
    } else if (source == "flat") {
      symbol = 0.5 * Matrix::Identity(n_max + 1, n_max + 1);
    } else {
      throw ConfigError("source must be fermi-dirac, flat or file");
    }
  }
  p.finish();
  if (!(c > 0.0) || !(epsilon > 0.0)) throw ConfigError("c and epsilon must be positive");

  const qf::QuasifreeSymbol r(symbol);
  const auto cert = qf::trace_class_certificate(r, c, epsilon);
  ExperimentResult out;
  out.table = CsvTable({"n", "occupation", "envelope", "below"});
  const auto& occ = r.occupations();
  for (std::size_t i = 0; i < occ.size(); ++i) {
    const double env = c * std::pow(static_cast<double>(i + 1), -(1.0 + epsilon));
    out.table.add_row({fmt(i + 1), fmt(occ[i]), fmt(env), fmt(occ[i] < env)});
  }
  out.checks.push_back({"certificate", static_cast<double>(cert.worst_n), static_cast<double>(occ.size()), cert.pass});
  out.metrics["worst_n"] = static_cast<double>(cert.worst_n);
  out.metrics["smallest_constant"] = qf::smallest_certificate_constant(r, epsilon);
  if (cert.entropy_bound) out.metrics["entropy_bound"] = *cert.entropy_bound;
  return out;
}

const std::map<std::string, std::string>& anchors() {
  static const std::map<std::string, std::string> a{
      {"kms-gap", "entropy inequality characterization of KMS states"},
      {"fermi-dirac", "Fermi-Dirac occupation 1/(1+exp(p0^2+mu))"},
      {"decay-sweep", "high-energy occupation decay bound"},
      {"toy-chain", "truncated lattice toy model"},
      {"lemma1", "momentum-uniform interaction bound (Galilei invariance)"},
      {"cutoff", "momentum cutoff removal"},
      {"entropy-dominance", "pinching entropy dominance (quasifree comparison state)"},
      {"certificate", "trace-class certificate for local normality"},
  };
  return a;
}

std::string timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

bool ExperimentResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ExperimentResult run_experiment(const cfg::ExperimentConfig& config, unsigned jobs) {
  if (!cfg::is_experiment(config.experiment)) throw ConfigError("unknown experiment '" + config.experiment + "'");
  if (!config.coupling.empty() && config.experiment != "toy-chain")
    throw ConfigError("[coupling] is only valid for toy-chain");
  const auto start = std::chrono::steady_clock::now();
  Parameters p(config.parameters);
  const auto& name = config.experiment;
  ExperimentResult out;
  if (name == "kms-gap")
    out = kms_gap_experiment(p, config.seed, jobs);
  else if (name == "fermi-dirac")
    out = fermi_dirac_experiment(p);
  else if (name == "decay-sweep")
    out = decay_sweep_experiment(p);
  else if (name == "toy-chain")
    out = toy_chain_experiment(p, config, config.seed);
  else if (name == "lemma1")
    out = lemma1_experiment(p, jobs);
  else if (name == "cutoff")
    out = cutoff_experiment(p);
  else if (name == "entropy-dominance")
    out = entropy_dominance_experiment(p, config.seed, jobs);
  else
    out = certificate_experiment(p);
  out.experiment = name;
  out.anchor = anchors().at(name);
  out.seed = config.seed;
  out.parameters = p.resolved();
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string summary_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["anchor"] = r.anchor;
  j["seed"] = r.seed;
  j["parameters"] = r.parameters;
  j["pass"] = r.pass();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  j["metrics"] = r.metrics;
  j["wall_time_seconds"] = r.wall_seconds;
  j["created"] = timestamp();
  return j.dump(2) + "\n";
}

void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / (r.experiment + ".csv"));
    r.table.write(csv);
    if (!csv) throw std::runtime_error("cannot write " + (dir / (r.experiment + ".csv")).string());
  }
  std::ofstream js(dir / (r.experiment + ".summary.json"));
  js << summary_json(r);
  if (!js) throw std::runtime_error("cannot write summary in " + dir.string());
}

Report consolidate(std::span<const std::string> summary_paths) {
  Report rep;
  for (const auto& path : summary_paths) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing summary " + path);
    nlohmann::json j;
    try {
      in >> j;
      ReportRow row;
      row.experiment = j.at("experiment").get<std::string>();
      row.anchor = j.value("anchor", "");
      row.pass = j.at("pass").get<bool>();
      for (const auto& c : j.value("checks", nlohmann::json::array()))
        if (!c.at("pass").get<bool>()) row.failing_checks.push_back(c.at("name").get<std::string>());
      rep.rows.push_back(std::move(row));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("malformed summary " + path + ": " + e.what());
    }
  }
  std::ostringstream os;
  os << "experiment           status  anchor\n";
  for (const auto& r : rep.rows) {
    os << r.experiment << std::string(r.experiment.size() < 21 ? 21 - r.experiment.size() : 1, ' ')
       << (r.pass ? "PASS" : "FAIL") << "    " << r.anchor << '\n';
    if (!r.pass) rep.status = 1;
  }
  if (rep.status) {
    os << "failing:\n";
    for (const auto& r : rep.rows) {
      if (r.pass) continue;
      os << "  " << r.experiment << ':';
      for (const auto& c : r.failing_checks) os << ' ' << c;
      os << '\n';
    }
  }
  rep.text = os.str();
  return rep;
}

}  // namespace kmslab::lab
