#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "kmslab/config.hpp"
#include "kmslab/experiments.hpp"
#include "kmslab/quadrature.hpp"

using namespace kmslab;

namespace {

struct RunFlags {
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

int run(const std::string& experiment, const RunFlags& flags) {
  cfg::ExperimentConfig config;
  try {
    if (!flags.config_path.empty()) config = cfg::load_config(flags.config_path);
    if (!config.experiment.empty() && config.experiment != experiment)
      throw cfg::ConfigError("config is for '" + config.experiment + "', not '" + experiment + "'");
    config.experiment = experiment;
    if (flags.seed) config.seed = *flags.seed;
  } catch (const cfg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return lab::kExitConfig;
  }
  std::string dir = flags.output_dir.empty() ? config.output_path : flags.output_dir;
  if (dir.empty()) dir = ".";

  lab::ExperimentResult result;
  try {
    result = lab::run_experiment(config, flags.jobs);
  } catch (const cfg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return lab::kExitConfig;
  } catch (const quad::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return lab::kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return lab::kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return lab::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return lab::kExitNumerical;
  }
  try {
    lab::write_outputs(result, dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lab::kExitConfig;
  }
  for (const auto& c : result.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
              << " threshold=" << format_double(c.threshold) << '\n';
  std::cout << result.experiment << ": " << (result.pass() ? "PASS" : "FAIL") << '\n';
  return result.pass() ? lab::kExitPass : lab::kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume numerics for fermionic KMS states"};
  app.require_subcommand(1);

  RunFlags flags;
  std::uint64_t seed = 0;
  int status = 0;
  for (const char* name : cfg::kExperimentNames) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", flags.config_path, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--output", flags.output_dir, "directory for <experiment>.csv and .summary.json");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->callback([&, sub, name] {
      if (sub->count("--seed")) flags.seed = seed;
      status = run(name, flags);
    });
  }

  std::vector<std::string> summaries;
  auto* report = app.add_subcommand("report", "pass/fail matrix over summary files");
  report->add_option("summaries", summaries, "<experiment>.summary.json files");
  report->callback([&] {
    try {
      const auto rep = lab::consolidate(summaries);
      std::cout << rep.text;
      status = rep.status;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      status = lab::kExitConfig;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lab::kExitConfig;
  }
  return status;
}
