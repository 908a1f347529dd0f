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
#include "tdsplit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace tdsplit {

namespace {

CheckReport make_report(std::string name, double residual, double tolerance,
                        std::string context, std::uint64_t seed) {
  CheckReport r;
  r.name = std::move(name);
  r.residual = residual;
  r.tolerance = tolerance;
  r.passed = std::isfinite(residual) && residual <= tolerance;
  r.context = std::move(context);
  r.seed = seed;
  return r;
}

Vector block_weights(const BlockLayout& b, double tau) {
  Vector w = Vector::Ones(b.size());
  w.head(b.trajectory_size()).setConstant(tau);
  return w;
}

}  // namespace

Vector random_vector(Index size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector z(size);
  for (Index i = 0; i < size; ++i) z[i] = normal(rng);
  return z;
}

CheckReport dissipation_check(const AssembledSystem& system, int samples, std::uint64_t seed,
                              double tolerance) {
  const double tau = system.partition.tau;
  const Index n = system.layout.n;
  double worst = 0.0;
  std::string where = "no samples";
  std::map<BlockSignature, bool> seen;
  std::uint64_t stream = seed;
  for (std::size_t k = 0; k < system.blocks.size(); ++k) {
    const auto& sig = system.signatures[k];
    if (seen[sig]) continue;
    seen[sig] = true;
    const BlockLayout& b = system.layout.blocks[k];
    const Vector w = block_weights(b, tau);
    for (int s = 0; s < samples; ++s) {
      const Vector z = random_vector(b.size(), stream++);
      const double lhs = (w.array() * z.array() * (system.blocks[k] * z).array()).sum();
      double observed = 0.0, actuated = 0.0;
      for (int j = 1; j <= b.steps; ++j) {
        const auto x = z.segment(b.x(j), n);
        observed += x.dot(system.output_gram * x);
      }
      for (int j = 0; j < b.steps; ++j) {
        const auto l = z.segment(b.lambda(j), n);
        actuated += l.dot(system.control_gram * l);
      }
      observed *= tau;
      actuated *= tau;
      const double defect = std::abs(lhs + observed + actuated) /
                            (std::abs(lhs) + std::abs(observed) + std::abs(actuated) + 1.0);
      if (defect >= worst) {
        worst = defect;
        where = "block " + to_string(sig) + ", sample " + std::to_string(s);
      }
    }
  }
  return make_report("dissipation", worst, tolerance, where, seed);
}

CheckReport skew_check(const SparseMatrix& coupling) {
  if (coupling.rows() != coupling.cols())
    return make_report("skew", std::numeric_limits<double>::infinity(), 0.0, "not square", 0);
  const SparseMatrix sum = coupling + SparseMatrix(coupling.transpose());
  double worst = 0.0;
  std::string where = "N + N^T = 0";
  for (Index k = 0; k < sum.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sum, k); it; ++it)
      if (std::abs(it.value()) > worst) {
        worst = std::abs(it.value());
        where = "entry (" + std::to_string(it.row()) + "," + std::to_string(it.col()) + ")";
      }
  return make_report("skew", worst, 0.0, where, 0);
}

double cayley_ratio_M(const AssembledSystem& system, const FactorSet& factors, const Vector& z) {
  const Vector y = solve_M(system, factors, z);
  const Vector image = 2.0 * factors.mu() * y - z;  // (mu I + M) y
  return weighted_norm(image, system.weights) / weighted_norm(z, system.weights);
}

double cayley_ratio_N(const AssembledSystem& system, const FactorSet& factors, const Vector& z) {
  const Vector y = solve_N(factors, z);
  const Vector image = 2.0 * factors.mu() * y - z;
  return weighted_norm(image, system.weights) / weighted_norm(z, system.weights);
}

ContractionReports contraction_check(const AssembledSystem& system, double mu, int samples,
                                     std::uint64_t seed, double tolerance) {
  const FactorSet factors = factorize(system, mu);
  double worst_m = 0.0, worst_n = 0.0;
  int at_m = -1, at_n = -1;
  for (int s = 0; s < samples; ++s) {
    const Vector z = random_vector(system.size(), seed + static_cast<std::uint64_t>(s));
    const double rm = cayley_ratio_M(system, factors, z) - 1.0;
    const double rn = std::abs(cayley_ratio_N(system, factors, z) - 1.0);
    if (rm > worst_m || at_m < 0) worst_m = std::max(rm, 0.0), at_m = s;
    if (rn > worst_n || at_n < 0) worst_n = rn, at_n = s;
  }
  const std::string ctx = "mu=" + std::to_string(mu) + ", worst sample ";
  return {make_report("contraction_M", worst_m, tolerance, ctx + std::to_string(at_m), seed),
          make_report("isometry_N", worst_n, tolerance, ctx + std::to_string(at_n), seed)};
}

CheckReport injectivity_check(const AssembledSystem& system, double mu, int samples,
                              std::uint64_t seed, double tolerance) {
  double worst = 0.0;
  int at = -1;
  for (int s = 0; s < samples; ++s) {
    const Vector z = random_vector(system.size(), seed + static_cast<std::uint64_t>(s));
    const double nz = weighted_norm(z, system.weights);
    const double image = weighted_norm(mu * z - apply_M(system, z), system.weights);
    // Shortfall of ||(mu I - M) z|| below mu ||z||, in units of ||z||.
    const double shortfall = std::max(0.0, (mu * nz - image) / nz);
    if (shortfall > worst || at < 0) worst = shortfall, at = s;
  }
  return make_report("injectivity", worst, tolerance,
                     "mu=" + std::to_string(mu) + ", worst sample " + std::to_string(at), seed);
}

CheckReport monotonicity_check(const std::vector<IterationRecord>& history, double tolerance) {
  double worst = 0.0;
  std::optional<int> first_violation;
  std::optional<double> prev;
  int records = 0;
  for (const auto& rec : history) {
    if (!rec.delta_f) continue;
    ++records;
    const double cur = *rec.delta_f;
    if (prev) {
      const double excess = *prev > 0.0 ? (cur - *prev) / *prev
                            : cur > 0.0 ? std::numeric_limits<double>::infinity()
                                        : 0.0;
      worst = std::max(worst, excess);
      if (excess > tolerance && !first_violation) first_violation = rec.iteration;
    }
    prev = cur;
  }
  if (records == 0)
    return make_report("monotonicity", std::numeric_limits<double>::infinity(), tolerance,
                       "history has no residual records (baseline required)", 0);
  const std::string where = first_violation
                                ? "first increase at iteration " + std::to_string(*first_violation)
                                : "monotone over " + std::to_string(records) + " records";
  return make_report("monotonicity", worst, tolerance, where, 0);
}

CheckReport error_bound_check(const std::vector<IterationRecord>& history, double mu,
                              double tolerance) {
  double worst = 0.0;
  std::string where = "bound holds";
  int records = 0;
  for (const auto& rec : history) {
    if (!rec.delta_f || !rec.error_w) continue;
    ++records;
    const double bound = *rec.delta_f / mu;
    const double excess = bound > 0.0 ? *rec.error_w / bound - 1.0
                          : *rec.error_w > 0.0 ? std::numeric_limits<double>::infinity()
                                               : 0.0;
    if (excess > worst) {
      worst = excess;
      where = "iteration " + std::to_string(rec.iteration);
    }
  }
  if (records == 0)
    return make_report("error_bound", std::numeric_limits<double>::infinity(), tolerance,
                       "history has no residual records (baseline required)", 0);
  return make_report("error_bound", worst, tolerance, where, 0);
}

CheckReport fixed_point_check(const AssembledSystem& system, const Vector& z, double tolerance) {
  const Vector Mz = apply_M(system, z);
  Vector r = Mz + apply_N(system, z) - system.rhs;
  const auto& layout = system.layout;
  const int K = layout.intervals();
  // Spectators: first block's v_x and last block's v_lambda.
  r.segment(layout.offsets[0] + layout.blocks[0].vx(), layout.n).setZero();
  r.segment(layout.offsets[K - 1] + layout.blocks[K - 1].vlambda(), layout.n).setZero();
  const double scale = std::max({1.0, system.rhs.lpNorm<Eigen::Infinity>(), Mz.lpNorm<Eigen::Infinity>()});
  Index at = 0;
  const double worst = r.cwiseAbs().maxCoeff(&at) / scale;
  return make_report("fixed_point", worst, tolerance, "coordinate " + std::to_string(at), 0);
}

}  // namespace tdsplit
