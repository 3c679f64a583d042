#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kmslab::cfg {

/// Malformed or inconsistent configuration; the CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kExperimentNames[] = {"kms-gap", "fermi-dirac", "decay-sweep",       "toy-chain",
                                                   "lemma1",  "cutoff",      "entropy-dominance", "certificate"};

bool is_experiment(const std::string& name);

/// One run. File layout (INI):
///
///   experiment = decay-sweep
///   seed = 7
///   output = results
///   [parameters]
///   lambda = 5:50:5
///   h = 1
///   [coupling]          ; toy-chain only: k l r m = re [im]
///   0 1 1 0 = 0.01
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::map<std::string, std::string> parameters;
  std::vector<std::pair<std::string, std::string>> coupling;
  std::string output_path;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);

/// Typed access to ExperimentConfig::parameters. Every key read is recorded;
/// finish() rejects whatever was never asked for.
class Parameters {
 public:
  explicit Parameters(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  double real(const std::string& key, double fallback);
  long integer(const std::string& key, long fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::optional<std::string> optional_text(const std::string& key);
  std::optional<double> optional_real(const std::string& key);
  /// Comma separated values, or start:stop:step (inclusive of stop up to
  /// rounding).
  std::vector<double> list(const std::string& key, std::vector<double> fallback);

  void finish() const;

  /// Resolved values in key order, for the summary.
  const std::map<std::string, std::string>& resolved() const { return resolved_; }

 private:
  std::optional<std::string> take(const std::string& key);

  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
  std::map<std::string, std::string> resolved_;
};

double parse_real(const std::string& text);
std::vector<double> parse_list(const std::string& text);

}  // namespace kmslab::cfg
