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
#include "tdsplit/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "tdsplit/matrix_io.hpp"
#include "tdsplit/pde.hpp"

namespace tdsplit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const json& section(const json& doc, const char* name) {
  static const json empty = json::object();
  if (!doc.contains(name)) return empty;
  const json& s = doc.at(name);
  if (!s.is_object()) throw ConfigError(std::string(name) + " must be an object");
  return s;
}

template <class T>
T field(const json& sec, const std::string& path, const char* key, T fallback) {
  if (!sec.contains(key)) return fallback;
  try {
    return sec.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + " has the wrong type");
  }
}

std::string resolve(const std::string& spec, const fs::path& base, bool keyword) {
  if (keyword || spec.empty()) return spec;
  fs::path p(spec);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.string();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::ofstream open_artifact(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

std::string grid_label(const std::vector<int>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "x" : "") + std::to_string(cells[i]);
  return s;
}

void write_trajectory(const fs::path& path, const Matrix& samples, double tau, const char* prefix) {
  auto out = open_artifact(path);
  out << "t";
  for (Index i = 0; i < samples.rows(); ++i) out << "," << prefix << i;
  out << "\n";
  for (Index j = 0; j < samples.cols(); ++j) {
    out << static_cast<double>(j) * tau;
    for (Index i = 0; i < samples.rows(); ++i) out << "," << samples(i, j);
    out << "\n";
  }
}

void write_solution(const fs::path& dir, const Solution& s, double tau) {
  write_trajectory(dir / "solution_x.csv", s.trajectories.x, tau, "x");
  write_trajectory(dir / "solution_lambda.csv", s.trajectories.lambda, tau, "lambda");
  write_trajectory(dir / "solution_u.csv", s.control, tau, "u");
}

void write_history(const fs::path& path, const SolveReport& report) {
  const bool with_baseline = report.baseline.has_value();
  auto out = open_artifact(path);
  out << "iter,delta_z";
  if (with_baseline) out << ",err_state,err_adjoint,err_control";
  out << ",cost";
  if (with_baseline) out << ",delta_f";
  out << "\n";
  for (const auto& rec : report.history) {
    out << rec.iteration << "," << rec.delta_z;
    if (with_baseline)
      out << "," << rec.errors->state << "," << rec.errors->adjoint << "," << rec.errors->control;
    out << "," << rec.cost;
    if (with_baseline) out << "," << *rec.delta_f;
    out << "\n";
  }
}

json optional_json(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

template <class T>
std::vector<T> or_single(const std::vector<T>& list, const T& single) {
  return list.empty() ? std::vector<T>{single} : list;
}

void check_pr_discretization(int K, int L) {
  require(K >= 2, "discretization.K = " + std::to_string(K) +
                      ": the splitting iteration needs K >= 2; set solver.baseline_only = true "
                      "for a direct solve without splitting");
  require(L >= K, "discretization.L must be at least discretization.K");
}

SolverParams params_for(const RunConfig& c, double mu) {
  SolverParams p;
  p.mu = mu;
  p.tol = c.tol;
  p.maxit = c.maxit;
  p.threads = c.threads;
  p.compute_baseline = c.baseline;
  return p;
}

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["model"] = {{"type", model_type}, {"cells", cells}, {"setting", setting}, {"rho", rho}};
  if (model_type == "heat") j["model"]["scaling"] = scaling;
  if (model_type == "generic")
    j["model"].update({{"A", path_A.string()}, {"B", path_B.string()}, {"C", path_C.string()}});
  j["ocp"] = {{"T", horizon}, {"alpha", alpha}, {"x0", x0}, {"y_ref", y_ref}};
  j["discretization"] = {{"L", total_steps}, {"K", intervals}};
  if (!steps_list.empty()) j["discretization"]["L_list"] = steps_list;
  if (!intervals_list.empty()) j["discretization"]["K_list"] = intervals_list;
  if (!cells_list.empty()) j["discretization"]["cells_list"] = cells_list;
  j["solver"] = {{"mu", mu}, {"tol", tol}, {"maxit", maxit}, {"threads", threads},
                 {"baseline", baseline}, {"baseline_only", baseline_only}};
  if (!mu_list.empty()) j["solver"]["mu_list"] = mu_list;
  j["output"] = {{"directory", output_dir.string()},
                 {"artifacts", std::vector<std::string>(artifacts.begin(), artifacts.end())}};
  j["bench"] = {{"repeats", bench_repeats}};
  if (!threads_list.empty()) j["bench"]["threads_list"] = threads_list;
  j["checks"] = {{"samples", check_samples}};
  j["seed"] = seed;
  return j;
}

RunConfig parse_config(const json& doc, const fs::path& base_dir) {
  require(doc.is_object(), "configuration must be a JSON object");
  RunConfig c;

  const json& model = section(doc, "model");
  c.model_type = field<std::string>(model, "model", "type", c.model_type);
  require(c.model_type == "heat" || c.model_type == "wave" || c.model_type == "generic",
          "model.type must be one of heat, wave, generic");
  if (c.model_type == "wave") c.cells = {10, 10};
  c.cells = field<std::vector<int>>(model, "model", "cells", c.cells);
  c.setting = field<int>(model, "model", "setting", c.setting);
  c.rho = field<double>(model, "model", "rho", c.rho);
  require(c.setting == 1 || c.setting == 2, "model.setting must be 1 or 2");
  require(c.rho >= 0.0, "model.rho must be nonnegative");
  c.scaling = field<std::string>(model, "model", "scaling", c.scaling);
  require(c.scaling == "volume" || c.scaling == "unit", "model.scaling must be volume or unit");
  if (c.model_type != "generic") {
    require(!c.cells.empty() && c.cells.size() <= 3, "model.cells must list 1 to 3 axis counts");
    for (int n : c.cells) require(n >= 2, "model.cells entries must be at least 2");
    if (c.model_type == "wave") require(c.cells.size() == 2, "model.cells must be 2D for the wave model");
  } else {
    for (const char* key : {"A", "B", "C"})
      require(model.contains(key), std::string("model.") + key + " is required for generic models");
    c.path_A = resolve(field<std::string>(model, "model", "A", ""), base_dir, false);
    c.path_B = resolve(field<std::string>(model, "model", "B", ""), base_dir, false);
    c.path_C = resolve(field<std::string>(model, "model", "C", ""), base_dir, false);
    for (const auto* p : {&c.path_A, &c.path_B, &c.path_C})
      require(fs::exists(*p), "model: file not found: " + p->string());
  }

  const json& ocp = section(doc, "ocp");
  c.horizon = field<double>(ocp, "ocp", "T", c.horizon);
  c.alpha = field<double>(ocp, "ocp", "alpha", c.alpha);
  c.x0 = field<std::string>(ocp, "ocp", "x0", c.x0);
  c.y_ref = field<std::string>(ocp, "ocp", "y_ref", c.y_ref);
  require(c.horizon > 0.0, "ocp.T must be positive");
  require(c.alpha > 0.0, "ocp.alpha must be positive");
  const bool x0_keyword = c.x0 == "ones" || c.x0 == "zeros" || c.x0 == "zero";
  c.x0 = resolve(c.x0, base_dir, x0_keyword);
  require(x0_keyword || fs::exists(c.x0), "ocp.x0: file not found: " + c.x0);
  c.y_ref = resolve(c.y_ref, base_dir, c.y_ref == "zero");
  require(c.y_ref == "zero" || fs::exists(c.y_ref), "ocp.y_ref: file not found: " + c.y_ref);

  const json& disc = section(doc, "discretization");
  c.total_steps = field<int>(disc, "discretization", "L", c.total_steps);
  c.intervals = field<int>(disc, "discretization", "K", c.intervals);
  c.steps_list = field<std::vector<int>>(disc, "discretization", "L_list", {});
  c.intervals_list = field<std::vector<int>>(disc, "discretization", "K_list", {});
  c.cells_list = field<std::vector<std::vector<int>>>(disc, "discretization", "cells_list", {});
  require(c.total_steps >= 1, "discretization.L must be positive");
  require(c.intervals >= 1, "discretization.K must be positive");
  for (int L : c.steps_list) require(L >= 1, "discretization.L_list entries must be positive");
  for (int K : c.intervals_list) require(K >= 1, "discretization.K_list entries must be positive");
  for (const auto& cells : c.cells_list) {
    require(cells.size() == c.cells.size() || c.model_type == "generic",
            "discretization.cells_list entries must match the model dimension");
    for (int n : cells) require(n >= 2, "discretization.cells_list entries must be at least 2");
  }

  const json& solver = section(doc, "solver");
  c.mu = field<double>(solver, "solver", "mu", c.mu);
  c.mu_list = field<std::vector<double>>(solver, "solver", "mu_list", {});
  c.tol = field<double>(solver, "solver", "tol", c.tol);
  c.maxit = field<int>(solver, "solver", "maxit", c.maxit);
  if (solver.contains("threads")) {
    const json& t = solver.at("threads");
    if (t.is_string()) {
      require(t.get<std::string>() == "auto", "solver.threads must be a count or \"auto\"");
      c.threads = 0;
    } else {
      const int n = field<int>(solver, "solver", "threads", 1);
      require(n >= 0, "solver.threads must be nonnegative");
      c.threads = static_cast<unsigned>(n);
    }
  }
  c.baseline = field<bool>(solver, "solver", "baseline", c.baseline);
  c.baseline_only = field<bool>(solver, "solver", "baseline_only", c.baseline_only);
  require(c.mu > 0.0, "solver.mu must be positive");
  for (double mu : c.mu_list) require(mu > 0.0, "solver.mu_list entries must be positive");
  require(c.tol > 0.0, "solver.tol must be positive");
  require(c.maxit >= 1, "solver.maxit must be at least 1");

  const json& output = section(doc, "output");
  c.output_dir = resolve(field<std::string>(output, "output", "directory", c.output_dir.string()),
                         base_dir, false);
  if (output.contains("artifacts")) {
    const auto list = field<std::vector<std::string>>(output, "output", "artifacts", {});
    c.artifacts = {list.begin(), list.end()};
    for (const auto& a : c.artifacts)
      require(a == "history" || a == "timings" || a == "solution" || a == "checks",
              "output.artifacts: unknown artifact '" + a + "'");
  }

  const json& bench_sec = section(doc, "bench");
  c.bench_repeats = field<int>(bench_sec, "bench", "repeats", c.bench_repeats);
  c.threads_list = field<std::vector<unsigned>>(bench_sec, "bench", "threads_list", {});
  require(c.bench_repeats >= 1, "bench.repeats must be at least 1");

  const json& checks = section(doc, "checks");
  c.check_samples = field<int>(checks, "checks", "samples", c.check_samples);
  require(c.check_samples >= 1, "checks.samples must be at least 1");

  if (doc.contains("seed")) {
    try {
      c.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const json::exception&) {
      throw ConfigError("seed must be a nonnegative integer");
    }
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

LtiModel build_model(const RunConfig& c) { return build_model(c, c.cells); }

LtiModel build_model(const RunConfig& c, const std::vector<int>& cells) {
  LtiModel model;
  if (c.model_type == "generic") {
    return load_generic_model(c.path_A, c.path_B, c.path_C, c.x0, c.alpha, c.y_ref);
  }
  const GridSpec grid = GridSpec::make(cells);
  if (c.model_type == "heat") {
    const HeatScaling scaling = c.scaling == "unit" ? HeatScaling::Unit : HeatScaling::CellVolume;
    if (c.setting == 1) {
      model = build_heat(grid, full_mask(grid), full_mask(grid), c.alpha, scaling);
    } else {
      const auto [control, observation] = heat_split_masks(grid);
      model = build_heat(grid, control, observation, c.alpha, scaling);
    }
  } else {
    model = build_wave(grid, c.rho,
                       c.setting == 1 ? WaveSetting::FullDomain : WaveSetting::ForceAndStrain,
                       c.alpha);
  }
  if (c.x0 == "zeros" || c.x0 == "zero") model.x0.setZero();
  else if (c.x0 != "ones") model.x0 = read_dense_vector(c.x0);
  if (c.y_ref != "zero") model.y_ref = read_reference_csv(c.y_ref);
  check_model(model);
  return model;
}

json to_json(const CheckReport& r) {
  return {{"name", r.name},         {"passed", r.passed},   {"residual", r.residual},
          {"tolerance", r.tolerance}, {"context", r.context}, {"seed", r.seed}};
}

std::vector<CheckReport> run_checks(const AssembledSystem& system, const SolveReport& report,
                                    double mu, double tol, std::uint64_t seed, int samples) {
  std::vector<CheckReport> checks;
  checks.push_back(dissipation_check(system, samples, seed));
  checks.push_back(skew_check(system.coupling));
  const auto contraction = contraction_check(system, mu, std::min(samples, 20), seed);
  checks.push_back(contraction.block);
  checks.push_back(contraction.coupling);
  checks.push_back(injectivity_check(system, mu, std::min(samples, 20), seed));
  if (report.converged) checks.push_back(fixed_point_check(system, report.z, 10.0 * tol));
  if (report.baseline) {
    checks.push_back(monotonicity_check(report.history));
    checks.push_back(error_bound_check(report.history, mu));
  }
  return checks;
}

int run(const RunConfig& config, std::ostream& log) {
  const LtiModel model = build_model(config);
  fs::create_directories(config.output_dir);
  const fs::path& dir = config.output_dir;

  if (config.baseline_only) {
    const DirectSolution direct = direct_solve(model, config.horizon, config.total_steps);
    const double tau = config.horizon / config.total_steps;
    if (config.wants("solution")) write_solution(dir, direct.solution, tau);
    if (config.wants("timings")) {
      json t = {{"direct_solve_seconds", direct.seconds}, {"cost", direct.solution.cost},
                {"seed", config.seed}, {"config", config.to_json()}};
      open_artifact(dir / "timings.json") << t.dump(2) << "\n";
    }
    log << "direct solve: cost " << direct.solution.cost << " in " << direct.seconds << " s\n";
    return kExitConverged;
  }

  check_pr_discretization(config.intervals, config.total_steps);
  const TimePartition partition = make_partition(config.horizon, config.total_steps, config.intervals);
  const AssembledSystem system = assemble_system(model, partition);
  const SolveReport report = pr_solve(model, system, params_for(config, config.mu));

  if (config.wants("history")) write_history(dir / "history.csv", report);
  if (config.wants("solution")) write_solution(dir, report.solution, partition.tau);
  if (config.wants("timings")) {
    json t = {{"factorization_seconds", report.factorization_seconds},
              {"mean_iteration_seconds", report.mean_iteration_seconds},
              {"direct_solve_seconds", report.baseline ? json(report.baseline->seconds) : json(nullptr)},
              {"iterations_to_1pct_control_error", optional_json(report.iterations_to_1pct)},
              {"iterations", report.iterations},
              {"converged", report.converged},
              {"block_factorizations", report.block_factorizations},
              {"threads", report.threads},
              {"seed", config.seed},
              {"config", config.to_json()}};
    open_artifact(dir / "timings.json") << t.dump(2) << "\n";
  }
  if (config.wants("checks")) {
    json arr = json::array();
    for (const auto& c : run_checks(system, report, config.mu, config.tol, config.seed,
                                    config.check_samples))
      arr.push_back(to_json(c));
    open_artifact(dir / "checks.json") << arr.dump(2) << "\n";
  }

  log << (report.converged ? "converged" : "maxit reached") << " after " << report.iterations
      << " iterations";
  if (report.iterations_to_1pct) log << " (1% control error at iteration " << *report.iterations_to_1pct << ")";
  log << "\n";
  return report.converged ? kExitConverged : kExitMaxit;
}

std::vector<SweepRow> sweep(const RunConfig& config, std::ostream& log) {
  const auto mus = or_single(config.mu_list, config.mu);
  const auto Ks = or_single(config.intervals_list, config.intervals);
  const auto Ls = or_single(config.steps_list, config.total_steps);
  const auto grids = or_single(config.cells_list, config.cells);
  for (int K : Ks)
    for (int L : Ls) check_pr_discretization(K, L);

  fs::create_directories(config.output_dir);
  std::vector<SweepRow> rows;
  for (const auto& cells : grids) {
    const LtiModel model = build_model(config, cells);
    for (int L : Ls) {
      std::optional<DirectSolution> direct;
      if (config.baseline) direct = direct_solve(model, config.horizon, L);
      for (int K : Ks) {
        const TimePartition partition = make_partition(config.horizon, L, K);
        const AssembledSystem system = assemble_system(model, partition);
        for (double mu : mus) {
          const SolveReport r = pr_solve(model, system, params_for(config, mu),
                                         direct ? &*direct : nullptr);
          SweepRow row;
          row.mu = mu;
          row.intervals = K;
          row.total_steps = L;
          row.grid = config.model_type == "generic" ? "file" : grid_label(cells);
          row.converged = r.converged;
          row.iterations = r.iterations;
          row.iterations_to_1pct = r.iterations_to_1pct;
          if (!r.history.empty() && r.history.back().errors) row.final_errors = *r.history.back().errors;
          row.factorization_seconds = r.factorization_seconds;
          row.mean_iteration_seconds = r.mean_iteration_seconds;
          row.direct_seconds = direct ? direct->seconds : 0.0;
          log << "mu=" << mu << " K=" << K << " L=" << L << " grid=" << row.grid << ": "
              << (r.converged ? "converged" : "maxit") << " in " << r.iterations << " iterations\n";
          rows.push_back(row);
        }
      }
    }
  }

  auto out = open_artifact(config.output_dir / "sweep.csv");
  out << "mu,K,L,grid,converged,iterations,iterations_to_1pct,err_state,err_adjoint,err_control,"
         "factorization_seconds,mean_iteration_seconds,direct_seconds\n";
  for (const auto& r : rows) {
    out << r.mu << "," << r.intervals << "," << r.total_steps << "," << r.grid << ","
        << (r.converged ? 1 : 0) << "," << r.iterations << ",";
    if (r.iterations_to_1pct) out << *r.iterations_to_1pct;
    out << "," << r.final_errors.state << "," << r.final_errors.adjoint << ","
        << r.final_errors.control << "," << r.factorization_seconds << ","
        << r.mean_iteration_seconds << "," << r.direct_seconds << "\n";
  }
  return rows;
}

std::vector<BenchEntry> bench(const RunConfig& config, std::ostream& log) {
  using Clock = std::chrono::steady_clock;
  const auto Ks = or_single(config.intervals_list, config.intervals);
  const auto thread_counts = or_single(config.threads_list, config.threads);
  for (int K : Ks) check_pr_discretization(K, config.total_steps);

  const LtiModel model = build_model(config);
  fs::create_directories(config.output_dir);
  std::vector<BenchEntry> entries;
  for (int K : Ks) {
    const TimePartition partition = make_partition(config.horizon, config.total_steps, K);
    const AssembledSystem system = assemble_system(model, partition);
    Vector reference_z;
    double reference_iteration = 0.0;
    for (std::size_t t = 0; t < thread_counts.size(); ++t) {
      BenchEntry e;
      e.intervals = K;
      e.threads = thread_counts[t];
      std::vector<double> direct_s, factor_s, iter_s, total_s;
      for (int rep = 0; rep < config.bench_repeats; ++rep) {
        const DirectSolution direct = direct_solve(model, partition);
        SolverParams params = params_for(config, config.mu);
        params.threads = e.threads;
        const SolveReport r = pr_solve(model, system, params, &direct);

        // Time a fixed block of iterations so short runs still average over >= 10.
        const FactorSet factors = factorize(system, config.mu);
        WorkerPool pool(e.threads);
        const int timed = std::max(10, r.iterations);
        Vector z = initial_guess(model, partition);
        const auto start = Clock::now();
        for (int i = 0; i < timed; ++i) z = pr_step(z, factors, system, &pool);
        const double per_iter = std::chrono::duration<double>(Clock::now() - start).count() / timed;

        direct_s.push_back(direct.seconds);
        factor_s.push_back(r.factorization_seconds);
        iter_s.push_back(per_iter);
        e.timed_iterations = timed;
        e.iterations_to_1pct = r.iterations_to_1pct;
        if (r.iterations_to_1pct)
          total_s.push_back(r.factorization_seconds + *r.iterations_to_1pct * per_iter);
        if (t == 0 && rep == 0) reference_z = r.z;
        else if (r.z.size() != reference_z.size() || r.z != reference_z)
          e.identical_to_first_thread_count = false;
      }
      e.direct_seconds = median(direct_s);
      e.factorization_seconds = median(factor_s);
      e.iteration_seconds = median(iter_s);
      if (!total_s.empty()) e.total_to_1pct_seconds = median(total_s);
      if (t == 0) reference_iteration = e.iteration_seconds;
      e.iteration_time_ratio = reference_iteration > 0.0 ? e.iteration_seconds / reference_iteration : 1.0;
      log << "K=" << K << " threads=" << e.threads << ": direct " << e.direct_seconds
          << " s, factorizations " << e.factorization_seconds << " s, iteration "
          << e.iteration_seconds << " s\n";
      entries.push_back(e);
    }
  }

  auto csv = open_artifact(config.output_dir / "bench.csv");
  csv << "K,threads,direct_seconds,factorization_seconds,iteration_seconds,iterations_to_1pct,"
         "total_to_1pct_seconds,identical_outputs,iteration_time_ratio\n";
  json arr = json::array();
  for (const auto& e : entries) {
    csv << e.intervals << "," << e.threads << "," << e.direct_seconds << "," << e.factorization_seconds
        << "," << e.iteration_seconds << ",";
    if (e.iterations_to_1pct) csv << *e.iterations_to_1pct;
    csv << ",";
    if (e.total_to_1pct_seconds) csv << *e.total_to_1pct_seconds;
    csv << "," << (e.identical_to_first_thread_count ? 1 : 0) << "," << e.iteration_time_ratio << "\n";
    arr.push_back({{"K", e.intervals},
                   {"threads", e.threads},
                   {"direct_seconds", e.direct_seconds},
                   {"factorization_seconds", e.factorization_seconds},
                   {"iteration_seconds", e.iteration_seconds},
                   {"timed_iterations", e.timed_iterations},
                   {"iterations_to_1pct", optional_json(e.iterations_to_1pct)},
                   {"total_to_1pct_seconds", optional_json(e.total_to_1pct_seconds)},
                   {"identical_outputs", e.identical_to_first_thread_count},
                   {"iteration_time_ratio", e.iteration_time_ratio}});
  }
  json doc = {{"repeats", config.bench_repeats}, {"entries", arr}, {"seed", config.seed},
              {"config", config.to_json()}};
  open_artifact(config.output_dir / "bench.json") << doc.dump(2) << "\n";
  return entries;
}

void export_model_files(const RunConfig& config) {
  export_model(build_model(config), config.output_dir);
}

}  // namespace tdsplit
