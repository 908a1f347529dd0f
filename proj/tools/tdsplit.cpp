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
// Command line front end: run, sweep, bench and export-model.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tdsplit/experiment.hpp"
#include "tdsplit/matrix_io.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string output;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--output", o.output, "output directory (overrides output.directory)");
  cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  cmd->add_option("--seed", o.seed, "seed for randomized checks");
}

tdsplit::RunConfig resolve(const Overrides& o) {
  tdsplit::RunConfig c = tdsplit::load_config(o.config);
  if (!o.output.empty()) c.output_dir = o.output;
  if (o.threads) c.threads = *o.threads;
  if (o.seed) c.seed = *o.seed;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-domain splitting solver for linear-quadratic optimal control"};
  app.require_subcommand(1);

  Overrides o;
  auto* run = app.add_subcommand("run", "single splitting solve with artifacts");
  auto* sweep = app.add_subcommand("sweep", "sweep mu / K / L / grid lists");
  auto* bench = app.add_subcommand("bench", "timing medians for direct solve, factorizations and iterations");
  auto* exp = app.add_subcommand("export-model", "write the configured model as Matrix Market files");
  for (auto* cmd : {run, sweep, bench, exp}) add_common(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tdsplit::kExitConfigError;
  }

  try {
    const tdsplit::RunConfig config = resolve(o);
    if (run->parsed()) return tdsplit::run(config, std::cout);
    if (sweep->parsed()) {
      const auto rows = tdsplit::sweep(config, std::cout);
      for (const auto& r : rows)
        if (!r.converged) return tdsplit::kExitMaxit;
      return tdsplit::kExitConverged;
    }
    if (bench->parsed()) {
      tdsplit::bench(config, std::cout);
      return tdsplit::kExitConverged;
    }
    tdsplit::export_model_files(config);
    std::cout << "model written to " << config.output_dir.string() << "\n";
    return tdsplit::kExitConverged;
  } catch (const tdsplit::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  } catch (const tdsplit::ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
  } catch (const tdsplit::PartitionError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return tdsplit::kExitConfigError;
}
