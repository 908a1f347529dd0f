/*
 Copyright 2026 The tdsplit Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef TDSPLIT_EXPERIMENT_HPP
#define TDSPLIT_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdsplit/diagnostics.hpp"

namespace tdsplit {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resolved experiment configuration. See README.md for the JSON schema.
struct RunConfig {
  // model
  std::string model_type = "heat";  // heat | wave | generic
  std::vector<int> cells{32};
  int setting = 1;
  double rho = 0.0;
  std::string scaling = "volume";  // heat output weights: volume | unit
  std::filesystem::path path_A, path_B, path_C;

  // ocp
  double horizon = 1.0;
  double alpha = 1.0;
  std::string x0 = "ones";
  std::string y_ref = "zero";

  // discretization
  int total_steps = 32;
  int intervals = 4;
  std::vector<int> steps_list;
  std::vector<int> intervals_list;
  std::vector<std::vector<int>> cells_list;

  // solver
  double mu = 1.0;
  std::vector<double> mu_list;
  double tol = 1e-8;
  int maxit = 10000;
  unsigned threads = 1;
  bool baseline = true;
  bool baseline_only = false;

  // output
  std::filesystem::path output_dir = "tdsplit_out";
  std::set<std::string> artifacts{"history", "timings", "solution", "checks"};

  // bench
  int bench_repeats = 3;
  std::vector<unsigned> threads_list;

  std::uint64_t seed = kDefaultSeed;
  int check_samples = 100;

  bool wants(const std::string& artifact) const { return artifacts.contains(artifact); }
  nlohmann::json to_json() const;
};

/// Parses a configuration document. Relative file paths are resolved
/// against `base_dir`. Throws ConfigError naming the offending field.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

LtiModel build_model(const RunConfig& config);
LtiModel build_model(const RunConfig& config, const std::vector<int>& cells);

nlohmann::json to_json(const CheckReport& report);

/// Diagnostics written to checks.json.
std::vector<CheckReport> run_checks(const AssembledSystem& system, const SolveReport& report,
                                    double mu, double tol, std::uint64_t seed, int samples);

/// Exit codes of the command line tool.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitMaxit = 2;

/// Single solve with artifacts. Returns kExitConverged or kExitMaxit.
int run(const RunConfig& config, std::ostream& log);

struct SweepRow {
  double mu = 0.0;
  int intervals = 0;
  int total_steps = 0;
  std::string grid;
  bool converged = false;
  int iterations = 0;
  std::optional<int> iterations_to_1pct;
  ErrorNorms final_errors;
  double factorization_seconds = 0.0;
  double mean_iteration_seconds = 0.0;
  double direct_seconds = 0.0;
};

/// Cartesian sweep over mu_list x intervals_list x steps_list x cells_list.
/// Writes sweep.csv.
std::vector<SweepRow> sweep(const RunConfig& config, std::ostream& log);

struct BenchEntry {
  int intervals = 0;
  unsigned threads = 1;
  double direct_seconds = 0.0;
  double factorization_seconds = 0.0;
  double iteration_seconds = 0.0;
  std::optional<double> total_to_1pct_seconds;
  std::optional<int> iterations_to_1pct;
  int timed_iterations = 0;
  bool identical_to_first_thread_count = true;
  double iteration_time_ratio = 1.0;
};

/// Median timings over config.bench_repeats runs. Writes bench.csv and
/// bench.json.
std::vector<BenchEntry> bench(const RunConfig& config, std::ostream& log);

/// Writes the configured model in the generic file formats.
void export_model_files(const RunConfig& config);

}  // namespace tdsplit

#endif  // TDSPLIT_EXPERIMENT_HPP
