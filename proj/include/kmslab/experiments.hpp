#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kmslab/config.hpp"
#include "kmslab/csv.hpp"

namespace kmslab::lab {

struct Check {
  std::string name;
  double value = 0.0;
  /// Threshold the value is compared against (meaning depends on the check).
  double threshold = 0.0;
  bool pass = false;
};

struct ExperimentResult {
  std::string experiment;
  std::string anchor;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> parameters;
  CsvTable table{{}};
  std::vector<Check> checks;
  std::map<std::string, double> metrics;
  double wall_seconds = 0.0;

  bool pass() const;
};

/// Runs cfg.experiment. Errors propagate as exceptions: cfg::ConfigError and
/// std::invalid_argument for bad input, quad::NumericalError for quadrature
/// failure. `jobs` only changes speed; results are identical for any value.
ExperimentResult run_experiment(const cfg::ExperimentConfig& cfg, unsigned jobs = 1);

std::string summary_json(const ExperimentResult& r);

/// <dir>/<experiment>.csv and <dir>/<experiment>.summary.json.
void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir);

struct ReportRow {
  std::string experiment;
  std::string anchor;
  bool pass = false;
  std::vector<std::string> failing_checks;
};

struct Report {
  std::vector<ReportRow> rows;
  std::string text;
  /// 0 when every row passes (or there are none), 1 otherwise.
  int status = 0;
};

/// Throws std::runtime_error for a missing or unreadable summary.
Report consolidate(std::span<const std::string> summary_paths);

enum ExitStatus { kExitPass = 0, kExitInvariant = 1, kExitConfig = 2, kExitNumerical = 3 };

}  // namespace kmslab::lab
