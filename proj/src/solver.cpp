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
#include "tdsplit/solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace tdsplit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SparseMatrix shifted(const SparseMatrix& M, double mu) {
  SparseMatrix I(M.rows(), M.cols());
  I.setIdentity();
  SparseMatrix S = mu * I - M;
  S.makeCompressed();
  return S;
}

std::unique_ptr<SparseLU> factor(const SparseMatrix& S, const std::string& what) {
  auto lu = std::make_unique<SparseLU>();
  lu->compute(S);
  if (lu->info() != Eigen::Success)
    throw SolverError("singular factorization for " + what + ": " + lu->lastErrorMessage());
  return lu;
}

void check_size(const AssembledSystem& system, const Vector& z, const char* what) {
  if (z.size() != system.size())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(system.size()) + "," + std::to_string(z.size()) + ")");
}

double relative_or_absolute(double diff_sq, double ref_sq, double tau) {
  if (ref_sq == 0.0) return std::sqrt(tau * diff_sq);
  return std::sqrt(diff_sq / ref_sq);
}

}  // namespace

void SolverParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (maxit < 1) throw std::invalid_argument("maxit must be at least 1");
}

const SparseLU& FactorSet::block(const BlockSignature& sig) const {
  const auto it = blocks_.find(sig);
  if (it == blocks_.end()) throw SolverError("no factorization for block " + to_string(sig));
  return *it->second;
}

FactorSet factorize(const AssembledSystem& system, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  const auto start = Clock::now();
  FactorSet f;
  f.mu_ = mu;
  for (std::size_t k = 0; k < system.blocks.size(); ++k) {
    const auto& sig = system.signatures[k];
    if (f.blocks_.contains(sig)) continue;
    f.blocks_.emplace(sig, factor(shifted(system.blocks[k], mu), "block " + to_string(sig)));
  }
  f.coupling_ = factor(shifted(system.coupling, mu), "coupling");
  f.seconds_ = seconds_since(start);
  return f;
}

Vector apply_M(const AssembledSystem& system, const Vector& z, WorkerPool* pool) {
  check_size(system, z, "apply_M");
  Vector out(z.size());
  auto body = [&](std::size_t k) {
    const Index off = system.layout.offsets[k];
    const Index len = system.layout.blocks[k].size();
    out.segment(off, len) = system.blocks[k] * z.segment(off, len);
  };
  const auto K = system.blocks.size();
  if (pool) pool->parallel_for(K, body);
  else for (std::size_t k = 0; k < K; ++k) body(k);
  return out;
}

Vector apply_N(const AssembledSystem& system, const Vector& z) {
  check_size(system, z, "apply_N");
  return system.coupling * z;
}

Vector solve_M(const AssembledSystem& system, const FactorSet& factors, const Vector& r,
               WorkerPool* pool) {
  check_size(system, r, "solve_M");
  Vector out(r.size());
  auto body = [&](std::size_t k) {
    const Index off = system.layout.offsets[k];
    const Index len = system.layout.blocks[k].size();
    const Vector rk = r.segment(off, len);
    out.segment(off, len) = factors.block(system.signatures[k]).solve(rk);
  };
  const auto K = system.blocks.size();
  if (pool) pool->parallel_for(K, body);
  else for (std::size_t k = 0; k < K; ++k) body(k);
  return out;
}

Vector solve_N(const FactorSet& factors, const Vector& r) {
  return factors.coupling().solve(r);
}

Vector pr_step(const Vector& z, const FactorSet& factors, const AssembledSystem& system,
               WorkerPool* pool) {
  check_size(system, z, "pr_step");
  if (static_cast<Index>(factors.coupling().rows()) != system.size())
    throw std::invalid_argument("pr_step: factors were built for a different system");
  const double mu = factors.mu();
  const Vector a_minus_g = mu * z + apply_M(system, z, pool) - system.rhs;
  const Vector b = solve_N(factors, a_minus_g);
  const Vector c_minus_g = 2.0 * mu * b - a_minus_g - system.rhs;
  return solve_M(system, factors, c_minus_g, pool);
}

Matrix extract_control(const Matrix& lambda, const LtiModel& model) {
  if (lambda.rows() != model.state_dim())
    throw std::invalid_argument("extract_control: dimension mismatch (" +
                                std::to_string(model.state_dim()) + "," +
                                std::to_string(lambda.rows()) + ")");
  return (SparseMatrix(model.B.transpose()) * lambda) / model.alpha;
}

double cost(const Matrix& x, const Matrix& u, const LtiModel& model, double horizon) {
  const Index L = x.cols();
  if (u.cols() != L || x.rows() != model.state_dim() || u.rows() != model.control_dim())
    throw std::invalid_argument("cost: state and control samples have inconsistent sizes");
  if (L == 0) return 0.0;
  const double tau = horizon / static_cast<double>(L);
  Matrix residual = model.C * x;
  if (!model.y_ref.is_zero()) {
    std::vector<double> times;
    for (Index j = 1; j <= L; ++j) times.push_back(static_cast<double>(j) * tau);
    residual -= reference_samples(model, times, horizon);
  }
  return tau * residual.squaredNorm() + tau * model.alpha * u.squaredNorm();
}

Matrix simulate(const LtiModel& model, double horizon, const Matrix& u) {
  const Index L = u.cols();
  const double tau = horizon / static_cast<double>(L);
  SparseMatrix I(model.state_dim(), model.state_dim());
  I.setIdentity();
  SparseMatrix S = I - tau * model.A;
  S.makeCompressed();
  const auto lu = factor(S, "forward step");
  Matrix x(model.state_dim(), L + 1);
  x.col(0) = model.x0;
  for (Index j = 0; j < L; ++j) {
    const Vector rhs = x.col(j) + tau * (model.B * u.col(j));
    x.col(j + 1) = lu->solve(rhs);
  }
  return x;
}

DirectSolution direct_solve(const LtiModel& model, double horizon, int total_steps) {
  if (total_steps < 1) throw std::invalid_argument("direct_solve: L must be at least 1");
  const auto start = Clock::now();
  const Index n = model.state_dim();
  const int L = total_steps;
  const double tau = horizon / L;

  detail::StencilOptions opts;
  opts.left_input = false;
  opts.right_input = false;
  opts.aux_slots = false;
  const SparseMatrix K = detail::assemble_stencil(model.A, detail::output_gram(model),
                                                  detail::control_gram(model), tau, L, opts);
  const BlockLayout b{n, L};
  Vector g = Vector::Zero(K.rows());
  if (!model.y_ref.is_zero()) {
    std::vector<double> times;
    for (int j = 1; j <= L; ++j) times.push_back(j * tau);
    const Matrix y = reference_samples(model, times, horizon);
    const SparseMatrix Ct = model.C.transpose();
    for (int j = 1; j <= L; ++j) g.segment(b.x(j), n) = -(Ct * y.col(j - 1));
  }
  g.segment(b.lambda(0), n) += model.x0 / tau;

  const auto lu = factor(K, "monolithic optimality system");
  const Vector sol = lu->solve(g);
  if (!sol.allFinite()) throw SolverError("direct solve produced non-finite values");

  DirectSolution out;
  auto& tr = out.solution.trajectories;
  tr.x = Matrix::Zero(n, L + 1);
  tr.lambda = Matrix::Zero(n, L + 1);
  tr.x.col(0) = model.x0;
  for (int j = 1; j <= L; ++j) tr.x.col(j) = sol.segment(b.x(j), n);
  for (int j = 0; j < L; ++j) tr.lambda.col(j) = sol.segment(b.lambda(j), n);
  out.solution.control = extract_control(tr.lambda.leftCols(L), model);
  out.solution.cost = cost(tr.x.rightCols(L), out.solution.control, model, horizon);
  out.seconds = seconds_since(start);
  return out;
}

DirectSolution direct_solve(const LtiModel& model, const TimePartition& partition) {
  return direct_solve(model, partition.horizon, partition.total_steps);
}

Solution solution_from_iterate(const Vector& z, const LtiModel& model,
                               const TimePartition& partition) {
  Solution s;
  s.trajectories = concatenate(z, partition, model.x0);
  const int L = partition.total_steps;
  s.control = extract_control(s.trajectories.lambda.leftCols(L), model);
  s.cost = cost(s.trajectories.x.rightCols(L), s.control, model, partition.horizon);
  return s;
}

ErrorNorms error_norms(const Solution& candidate, const Solution& baseline, double tau) {
  const auto& a = candidate.trajectories;
  const auto& b = baseline.trajectories;
  const Index L = b.x.cols() - 1;
  if (a.x.cols() != b.x.cols() || a.x.rows() != b.x.rows() ||
      candidate.control.cols() != baseline.control.cols())
    throw std::invalid_argument("error_norms: candidate and baseline sampled differently");
  ErrorNorms e;
  e.state = relative_or_absolute((a.x.rightCols(L) - b.x.rightCols(L)).squaredNorm(),
                                 b.x.rightCols(L).squaredNorm(), tau);
  e.adjoint = relative_or_absolute((a.lambda.leftCols(L) - b.lambda.leftCols(L)).squaredNorm(),
                                   b.lambda.leftCols(L).squaredNorm(), tau);
  e.control = relative_or_absolute((candidate.control - baseline.control).squaredNorm(),
                                   baseline.control.squaredNorm(), tau);
  return e;
}

ErrorNorms error_norms(const Vector& z, const Solution& baseline, const LtiModel& model,
                       const TimePartition& partition) {
  return error_norms(solution_from_iterate(z, model, partition), baseline, partition.tau);
}

Vector initial_guess(const LtiModel& model, const TimePartition& partition) {
  const Matrix x = simulate(model, partition.horizon,
                            Matrix::Zero(model.control_dim(), partition.total_steps));
  return restrict_to_intervals(x, Matrix::Zero(x.rows(), x.cols()), partition);
}

SolveReport pr_solve(const LtiModel& model, const TimePartition& partition,
                     const SolverParams& params, const DirectSolution* baseline) {
  return pr_solve(model, assemble_system(model, partition), params, baseline);
}

SolveReport pr_solve(const LtiModel& model, const AssembledSystem& system,
                     const SolverParams& params, const DirectSolution* baseline) {
  params.validate();
  const auto& partition = system.partition;
  if (partition.intervals < 2) throw std::invalid_argument("pr_solve needs K >= 2");

  SolveReport report;
  if (!baseline && params.compute_baseline) {
    report.baseline = direct_solve(model, partition);
    baseline = &*report.baseline;
  } else if (baseline) {
    report.baseline = *baseline;
  }

  const FactorSet factors = factorize(system, params.mu);
  report.factorization_seconds = factors.seconds();
  report.block_factorizations = factors.block_factorization_count();

  WorkerPool pool(params.threads);
  report.threads = pool.threads();
  const double mu = params.mu;
  const Vector& W = system.weights;

  Vector z = initial_guess(model, partition);
  Vector f_star;
  auto residual_f = [&](const Vector& zi) {
    return weighted_norm(f_star - (mu * zi - apply_M(system, zi, &pool)), W);
  };
  if (baseline) {
    const auto& tr = baseline->solution.trajectories;
    report.baseline_z = restrict_to_intervals(tr.x, tr.lambda, partition);
    f_star = mu * report.baseline_z - apply_M(system, report.baseline_z, &pool);
    report.initial_delta_f = residual_f(z);
  }

  double iteration_seconds = 0.0;
  for (int i = 1; i <= params.maxit; ++i) {
    const auto start = Clock::now();
    Vector next = pr_step(z, factors, system, &pool);
    iteration_seconds += seconds_since(start);
    if (!next.allFinite())
      throw SolverError("non-finite iterate at iteration " + std::to_string(i));

    IterationRecord rec;
    rec.iteration = i;
    rec.delta_z = weighted_norm(next - z, W);
    const Solution sol = solution_from_iterate(next, model, partition);
    rec.cost = sol.cost;
    if (baseline) {
      rec.errors = error_norms(sol, baseline->solution, partition.tau);
      rec.delta_f = residual_f(next);
      rec.error_w = weighted_norm(report.baseline_z - next, W);
      if (!report.iterations_to_1pct && rec.errors->control <= 0.01)
        report.iterations_to_1pct = i;
    }
    const double scale = std::max(1.0, weighted_norm(next, W));
    report.history.push_back(rec);
    report.iterations = i;
    z = std::move(next);
    if (rec.delta_z <= params.tol * scale) {
      report.converged = true;
      break;
    }
  }
  report.mean_iteration_seconds = iteration_seconds / std::max(1, report.iterations);
  report.z = z;
  report.solution = solution_from_iterate(z, model, partition);
  return report;
}

}  // namespace tdsplit
