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
#include "tdsplit/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace tdsplit {

namespace {

std::string dims(Index r, Index c) {
  std::ostringstream os;
  os << r << "x" << c;
  return os.str();
}

std::vector<std::string> dimension_issues(const LtiModel& m) {
  std::vector<std::string> issues;
  auto mismatch = [&](const std::string& what, Index a, Index b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << "," << b << ")";
    issues.push_back(os.str());
  };
  const Index n = m.A.rows();
  if (n < 1) issues.push_back("A is empty");
  if (m.A.cols() != n) mismatch("A must be square, got " + dims(m.A.rows(), m.A.cols()), n, m.A.cols());
  if (m.B.cols() < 1) issues.push_back("B has no columns");
  if (m.B.rows() != n) mismatch("B rows vs A size", n, m.B.rows());
  if (m.C.rows() < 1) issues.push_back("C has no rows");
  if (m.C.cols() != n) mismatch("C columns vs A size", n, m.C.cols());
  if (m.x0.size() != n) mismatch("x0 length vs A size", n, m.x0.size());
  if (!m.y_ref.is_zero()) {
    const auto samples = static_cast<Index>(m.y_ref.times.size());
    if (m.y_ref.values.rows() != m.C.rows()) mismatch("y_ref width vs C rows", m.C.rows(), m.y_ref.values.rows());
    if (m.y_ref.values.cols() != samples) mismatch("y_ref samples vs times", samples, m.y_ref.values.cols());
  }
  return issues;
}

bool all_finite(const SparseMatrix& M) {
  for (Index k = 0; k < M.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(M, k); it; ++it)
      if (!std::isfinite(it.value())) return false;
  return true;
}

}  // namespace

void check_model(const LtiModel& model) {
  const auto issues = dimension_issues(model);
  if (!issues.empty()) throw ModelError(issues.front());
  if (!(model.alpha > 0.0) || !std::isfinite(model.alpha))
    throw ModelError("alpha must be positive, got " + std::to_string(model.alpha));
  if (!all_finite(model.A) || !all_finite(model.B) || !all_finite(model.C))
    throw ModelError("model matrices contain non-finite entries");
  if (!model.x0.allFinite()) throw ModelError("x0 contains non-finite entries");
  const auto& t = model.y_ref.times;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw ModelError("y_ref times must be strictly increasing");
  if (!model.y_ref.is_zero() && !model.y_ref.values.allFinite())
    throw ModelError("y_ref contains non-finite entries");
}

LtiModel make_model(SparseMatrix A, SparseMatrix B, SparseMatrix C, double alpha,
                    Vector x0, ReferenceSignal y_ref) {
  LtiModel m{std::move(A), std::move(B), std::move(C), alpha, std::move(x0), std::move(y_ref)};
  m.A.makeCompressed();
  m.B.makeCompressed();
  m.C.makeCompressed();
  check_model(m);
  return m;
}

OcpInstance make_ocp(LtiModel model, double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ModelError("horizon T must be positive");
  check_model(model);
  return {std::move(model), horizon};
}

std::string to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Symmetric: return "symmetric";
    case SymmetryClass::SkewSymmetric: return "skew-symmetric";
    case SymmetryClass::Both: return "symmetric and skew-symmetric";
    case SymmetryClass::Neither: return "neither";
  }
  return "neither";
}

std::string to_string(Definiteness d) {
  switch (d) {
    case Definiteness::Zero: return "zero";
    case Definiteness::NegativeSemidefinite: return "negative semidefinite";
    case Definiteness::PositiveSemidefinite: return "positive semidefinite";
    case Definiteness::Indefinite: return "indefinite";
  }
  return "indefinite";
}

ModelFindings validate_model(const LtiModel& model, int probe_samples, std::uint64_t seed) {
  ModelFindings f;
  f.dimension_issues = dimension_issues(model);
  f.dimensions_consistent = f.dimension_issues.empty();
  f.seed = seed;
  if (model.A.rows() != model.A.cols() || model.A.rows() == 0) return f;

  const SparseMatrix At = model.A.transpose();
  f.symmetric_residual = SparseMatrix(model.A - At).norm();
  f.skew_residual = SparseMatrix(model.A + At).norm();
  const double scale = std::max(1.0, model.A.norm());
  const double tol = 1e-12 * scale;
  const bool sym = f.symmetric_residual <= tol;
  const bool skew = f.skew_residual <= tol;
  f.symmetry = sym && skew ? SymmetryClass::Both
               : sym       ? SymmetryClass::Symmetric
               : skew      ? SymmetryClass::SkewSymmetric
                           : SymmetryClass::Neither;

  // Randomized Rayleigh quotients of the symmetric part (z^T A z = z^T sym(A) z).
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  f.probe_samples = std::max(probe_samples, 1);
  f.min_rayleigh = std::numeric_limits<double>::infinity();
  f.max_rayleigh = -std::numeric_limits<double>::infinity();
  Vector z(model.A.rows());
  for (int s = 0; s < f.probe_samples; ++s) {
    for (Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    const double q = z.dot(model.A * z) / z.squaredNorm();
    f.min_rayleigh = std::min(f.min_rayleigh, q);
    f.max_rayleigh = std::max(f.max_rayleigh, q);
  }
  const bool nonpos = f.max_rayleigh <= tol;
  const bool nonneg = f.min_rayleigh >= -tol;
  f.symmetric_part = nonpos && nonneg ? Definiteness::Zero
                     : nonpos         ? Definiteness::NegativeSemidefinite
                     : nonneg         ? Definiteness::PositiveSemidefinite
                                      : Definiteness::Indefinite;
  return f;
}

std::vector<std::string> ModelFindings::lines() const {
  std::vector<std::string> out;
  if (dimensions_consistent) {
    out.emplace_back("dimensions: consistent");
  } else {
    for (const auto& issue : dimension_issues) out.push_back("dimensions: " + issue);
  }
  std::ostringstream os;
  os << "A: " << to_string(symmetry) << " (||A-A^T||=" << symmetric_residual
     << ", ||A+A^T||=" << skew_residual << ")";
  out.push_back(os.str());
  os.str("");
  os << "sym(A): " << to_string(symmetric_part) << " over " << probe_samples
     << " samples (Rayleigh range [" << min_rayleigh << ", " << max_rayleigh
     << "], seed " << seed << ")";
  out.push_back(os.str());
  return out;
}

Matrix reference_samples(const LtiModel& model, std::span<const double> times,
                         std::optional<double> horizon) {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ModelError("sample times must be strictly increasing");
  if (horizon) {
    const double slack = 1e-12 * *horizon;
    for (double t : times)
      if (t < -slack || t > *horizon + slack)
        throw ModelError("sample time " + std::to_string(t) + " outside [0, T]");
  }

  const Index p = model.output_dim();
  Matrix out = Matrix::Zero(p, static_cast<Index>(times.size()));
  const auto& sig = model.y_ref;
  if (sig.is_zero()) return out;

  const auto& tt = sig.times;
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double t = times[s];
    const auto col = static_cast<Index>(s);
    if (t <= tt.front()) {
      out.col(col) = sig.values.col(0);
    } else if (t >= tt.back()) {
      out.col(col) = sig.values.col(static_cast<Index>(tt.size()) - 1);
    } else {
      const auto hi = static_cast<Index>(std::upper_bound(tt.begin(), tt.end(), t) - tt.begin());
      const Index lo = hi - 1;
      const double w = (t - tt[lo]) / (tt[hi] - tt[lo]);
      out.col(col) = (1.0 - w) * sig.values.col(lo) + w * sig.values.col(hi);
    }
  }
  return out;
}

}  // namespace tdsplit
