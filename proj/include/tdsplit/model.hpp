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
#ifndef TDSPLIT_MODEL_HPP
#define TDSPLIT_MODEL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdsplit/types.hpp"

namespace tdsplit {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tabulated reference signal y_ref. Samples are columns of `values`
/// (p x times.size()); an empty table is the zero signal.
struct ReferenceSignal {
  std::vector<double> times;
  Matrix values;

  static ReferenceSignal zero() { return {}; }
  bool is_zero() const { return times.empty(); }
};

/// Linear time-invariant model of the control problem
///
///   min  int_0^T |C x - y_ref|^2 + alpha |u|^2
///   s.t. x' = A x + B u,  x(0) = x0.
///
/// Instances built through make_model() are validated; the struct itself is
/// a plain aggregate so tests and builders can assemble it directly.
struct LtiModel {
  SparseMatrix A;
  SparseMatrix B;
  SparseMatrix C;
  double alpha = 1.0;
  Vector x0;
  ReferenceSignal y_ref;

  Index state_dim() const { return A.rows(); }
  Index control_dim() const { return B.cols(); }
  Index output_dim() const { return C.rows(); }
};

/// Throws ModelError if dimensions, alpha or entries violate the model
/// invariants.
void check_model(const LtiModel& model);

LtiModel make_model(SparseMatrix A, SparseMatrix B, SparseMatrix C,
                    double alpha, Vector x0,
                    ReferenceSignal y_ref = ReferenceSignal::zero());

struct OcpInstance {
  LtiModel model;
  double horizon = 1.0;
};

OcpInstance make_ocp(LtiModel model, double horizon);

enum class SymmetryClass { Symmetric, SkewSymmetric, Both, Neither };
enum class Definiteness { Zero, NegativeSemidefinite, PositiveSemidefinite, Indefinite };

std::string to_string(SymmetryClass c);
std::string to_string(Definiteness d);

/// Structural report on a model. Never throws; inconsistent dimensions are
/// reported and the symmetry analysis is skipped when A is not square.
struct ModelFindings {
  bool dimensions_consistent = true;
  std::vector<std::string> dimension_issues;
  SymmetryClass symmetry = SymmetryClass::Neither;
  double symmetric_residual = 0.0;  // ||A - A^T||_F
  double skew_residual = 0.0;       // ||A + A^T||_F
  Definiteness symmetric_part = Definiteness::Indefinite;
  double min_rayleigh = 0.0;
  double max_rayleigh = 0.0;
  int probe_samples = 0;
  std::uint64_t seed = 0;

  std::vector<std::string> lines() const;
};

ModelFindings validate_model(const LtiModel& model, int probe_samples = 32,
                             std::uint64_t seed = 20240607);

/// Evaluates y_ref at the given times (p x times.size()). Tables are
/// interpolated linearly and clamped outside their time range. When a
/// horizon is given, times must lie in [0, horizon] up to 1e-12 * horizon.
Matrix reference_samples(const LtiModel& model, std::span<const double> times,
                         std::optional<double> horizon = std::nullopt);

}  // namespace tdsplit

#endif  // TDSPLIT_MODEL_HPP
