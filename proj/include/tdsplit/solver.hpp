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
#ifndef TDSPLIT_SOLVER_HPP
#define TDSPLIT_SOLVER_HPP

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseLU>

#include "tdsplit/discretize.hpp"
#include "tdsplit/worker_pool.hpp"

namespace tdsplit {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverParams {
  double mu = 1.0;
  double tol = 1e-8;
  int maxit = 10000;
  unsigned threads = 1;  // 0 = hardware concurrency
  bool compute_baseline = true;

  void validate() const;
};

using SparseLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

/// Sparse LU factorizations of (mu I - M_k), one per distinct block
/// signature, and of (mu I - N).
class FactorSet {
 public:
  double mu() const { return mu_; }
  std::size_t block_factorization_count() const { return blocks_.size(); }
  const SparseLU& block(const BlockSignature& sig) const;
  const SparseLU& coupling() const { return *coupling_; }
  double seconds() const { return seconds_; }

 private:
  friend FactorSet factorize(const AssembledSystem& system, double mu);

  double mu_ = 0.0;
  double seconds_ = 0.0;
  std::map<BlockSignature, std::unique_ptr<SparseLU>> blocks_;
  std::unique_ptr<SparseLU> coupling_;
};

FactorSet factorize(const AssembledSystem& system, double mu);

/// Block-diagonal product M z; blocks are evaluated in parallel when a pool
/// is given.
Vector apply_M(const AssembledSystem& system, const Vector& z, WorkerPool* pool = nullptr);
Vector apply_N(const AssembledSystem& system, const Vector& z);

/// (mu I - M)^{-1} r, blockwise.
Vector solve_M(const AssembledSystem& system, const FactorSet& factors, const Vector& r,
               WorkerPool* pool = nullptr);
/// (mu I - N)^{-1} r.
Vector solve_N(const FactorSet& factors, const Vector& r);

/// One Peaceman-Rachford step
///   z' = (mu I - M)^{-1} [ (mu I + N)(mu I - N)^{-1} ((mu I + M) z - g) - g ].
Vector pr_step(const Vector& z, const FactorSet& factors, const AssembledSystem& system,
               WorkerPool* pool = nullptr);

/// Trajectories, control and cost of a solution on the global grid.
/// x and lambda are sampled at nodes 0..L, u at nodes 0..L-1.
struct Solution {
  Trajectories trajectories;
  Matrix control;
  double cost = 0.0;
};

/// Monolithic baseline: the single-interval optimality system assembled with
/// the same stencil and solved by sparse LU.
struct DirectSolution {
  Solution solution;
  double seconds = 0.0;
};

DirectSolution direct_solve(const LtiModel& model, double horizon, int total_steps);
DirectSolution direct_solve(const LtiModel& model, const TimePartition& partition);

/// u_j = B^T lambda_j / alpha for each column of lambda.
Matrix extract_control(const Matrix& lambda, const LtiModel& model);

/// tau * sum_{j=1..L} |C x_j - y_ref(t_j)|^2 + tau * alpha * sum_{j=0..L-1} |u_j|^2.
/// `x` holds nodes 1..L (n x L) and `u` nodes 0..L-1 (m_u x L).
double cost(const Matrix& x, const Matrix& u, const LtiModel& model, double horizon);

/// Forward implicit Euler (I - tau A) x_{j+1} = x_j + tau B u_j from x0;
/// returns nodes 0..L.
Matrix simulate(const LtiModel& model, double horizon, const Matrix& u);

struct ErrorNorms {
  double state = 0.0;
  double adjoint = 0.0;
  double control = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  double delta_z = 0.0;  // ||z^i - z^{i-1}||_W
  double cost = 0.0;
  std::optional<ErrorNorms> errors;
  std::optional<double> delta_f;       // ||(mu I - M)(z* - z^i)||_W
  std::optional<double> error_w;       // ||z* - z^i||_W
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  std::vector<IterationRecord> history;
  std::optional<double> initial_delta_f;
  std::optional<int> iterations_to_1pct;  // first iteration with control error <= 1%
  double factorization_seconds = 0.0;
  double mean_iteration_seconds = 0.0;
  std::size_t block_factorizations = 0;
  unsigned threads = 1;
  Vector z;
  Solution solution;
  std::optional<DirectSolution> baseline;
  Vector baseline_z;  // restriction of the baseline, empty without baseline
};

/// Initial iterate: uncontrolled forward simulation for the state, zero
/// adjoint, v_x from the simulation.
Vector initial_guess(const LtiModel& model, const TimePartition& partition);

/// Runs the iteration until ||z^{i+1} - z^i||_W <= tol * max(1, ||z^{i+1}||_W)
/// or maxit. When `baseline` is null and params.compute_baseline is set the
/// direct solve is run first.
SolveReport pr_solve(const LtiModel& model, const TimePartition& partition,
                     const SolverParams& params, const DirectSolution* baseline = nullptr);

/// Same, reusing an assembled system.
SolveReport pr_solve(const LtiModel& model, const AssembledSystem& system,
                     const SolverParams& params, const DirectSolution* baseline = nullptr);

/// Relative discrete L2-in-time errors of a split iterate against a baseline;
/// absolute errors when a baseline norm vanishes.
ErrorNorms error_norms(const Vector& z, const Solution& baseline, const LtiModel& model,
                       const TimePartition& partition);
ErrorNorms error_norms(const Solution& candidate, const Solution& baseline, double tau);

/// Builds a Solution (trajectories, control, cost) from a split iterate.
Solution solution_from_iterate(const Vector& z, const LtiModel& model,
                               const TimePartition& partition);

}  // namespace tdsplit

#endif  // TDSPLIT_SOLVER_HPP
