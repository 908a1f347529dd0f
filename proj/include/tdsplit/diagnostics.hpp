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
#ifndef TDSPLIT_DIAGNOSTICS_HPP
#define TDSPLIT_DIAGNOSTICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tdsplit/solver.hpp"

namespace tdsplit {

inline constexpr std::uint64_t kDefaultSeed = 20240607;

/// Outcome of one executable check. passed == (residual <= tolerance).
struct CheckReport {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string context;
  std::uint64_t seed = 0;
};

/// Energy identity of every block kind,
///   z^T W (M_k z) = -tau sum |C x_j|^2 - tau sum |B^T lambda_j|^2 / alpha,
/// over `samples` Gaussian vectors per kind. The residual is the largest
/// defect relative to |lhs| + both sums + 1.
CheckReport dissipation_check(const AssembledSystem& system, int samples,
                              std::uint64_t seed = kDefaultSeed, double tolerance = 1e-12);

/// Exact entrywise comparison of N and -N^T.
CheckReport skew_check(const SparseMatrix& coupling);

/// ||(mu I + M)(mu I - M)^{-1} z||_W / ||z||_W.
double cayley_ratio_M(const AssembledSystem& system, const FactorSet& factors, const Vector& z);
/// Same for the coupling; equals 1 for skew N.
double cayley_ratio_N(const AssembledSystem& system, const FactorSet& factors, const Vector& z);

struct ContractionReports {
  CheckReport block;     // max ratio <= 1 + tol
  CheckReport coupling;  // |ratio - 1| <= tol
};

ContractionReports contraction_check(const AssembledSystem& system, double mu, int samples,
                                     std::uint64_t seed = kDefaultSeed, double tolerance = 1e-10);

/// ||(mu I - M) z||_W >= mu ||z||_W - tol ||z||_W for Gaussian samples.
CheckReport injectivity_check(const AssembledSystem& system, double mu, int samples,
                              std::uint64_t seed = kDefaultSeed, double tolerance = 1e-10);

/// ||df^{i+1}||_W <= ||df^i||_W (1 + tol) along the recorded history.
/// Fails (residual = infinity) when the history has no residual records.
CheckReport monotonicity_check(const std::vector<IterationRecord>& history,
                               double tolerance = 1e-10);

/// ||z* - z^i||_W <= ||df^i||_W / mu along the recorded history.
CheckReport error_bound_check(const std::vector<IterationRecord>& history, double mu,
                              double tolerance = 1e-10);

/// Max-norm residual of (M + N) z = g over non-spectator coordinates,
/// relative to max(1, ||g||_inf, ||M z||_inf).
CheckReport fixed_point_check(const AssembledSystem& system, const Vector& z, double tolerance);

/// Gaussian vector with the given seed; shared by the checks and tests.
Vector random_vector(Index size, std::uint64_t seed);

}  // namespace tdsplit

#endif  // TDSPLIT_DIAGNOSTICS_HPP
