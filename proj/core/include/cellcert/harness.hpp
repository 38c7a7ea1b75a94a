#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cellcert/certifier.hpp"
#include "cellcert/rng.hpp"
#include "cellcert/subsets.hpp"

namespace cellcert::harness {

/// Config file problem: unknown field, wrong type, missing requirement.
/// Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment;
  int d = 0;
  int M = 0;
  std::vector<int> d_list;
  std::vector<int> M_list;
  int trials = 0;
  int x_count = 0;
  int n = 0;                // covariance sample count
  double threshold = 0.1;   // covariance truncation threshold
  double t = 3.0;           // covariance tail parameter
  std::uint64_t master_seed = 0;
  ConstantsConfig constants;
  SolverOptions solver;
  std::string output_path;
  int threads = 0;  // 0: CELLCERT_THREADS env or hardware concurrency
};

/// Parses and validates a JSON config; unknown fields are rejected with the
/// offending key named.
ExperimentConfig parse_config_text(const std::string& json_text);
ExperimentConfig parse_config_file(const std::string& path);

struct AssertionResult {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double limit = 0.0;
};

struct RunReport {
  std::vector<AssertionResult> assertions;
  std::string csv_path;
  std::string summary_path;
  bool all_pass = true;
};

/// Runs one experiment: writes the CSV and a summary JSON (schema 1) next to
/// it, returns per-assertion outcomes.
RunReport run_experiment(const ExperimentConfig& cfg);

/// Full pipeline for a config file. Returns the process exit code:
/// 0 all assertions pass, 1 an assertion failed. Config problems throw
/// ConfigError (callers map it to exit 2).
int run(const std::string& config_path);

}  // namespace cellcert::harness
