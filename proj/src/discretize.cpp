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
#include "tdsplit/discretize.hpp"

#include <cmath>
#include <string>

namespace tdsplit {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_block(Triplets& t, Index r0, Index c0, const SparseMatrix& M, double scale) {
  for (Index k = 0; k < M.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(M, k); it; ++it)
      t.emplace_back(r0 + it.row(), c0 + it.col(), scale * it.value());
}

void add_identity(Triplets& t, Index r0, Index c0, Index n, double scale) {
  for (Index i = 0; i < n; ++i) t.emplace_back(r0 + i, c0 + i, scale);
}

BlockKind kind_of(int k, int intervals) {
  if (k == 0) return BlockKind::First;
  if (k == intervals - 1) return BlockKind::Last;
  return BlockKind::Interior;
}

void check_interval(const TimePartition& p, int k) {
  if (k < 0 || k >= p.intervals)
    throw PartitionError("interval index " + std::to_string(k) + " out of range [0, " +
                         std::to_string(p.intervals) + ")");
}

}  // namespace

TimePartition make_partition(double horizon, int total_steps, int intervals) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw PartitionError("horizon T must be positive");
  if (intervals < 2)
    throw PartitionError("K must be at least 2; use the direct solver for a single interval");
  if (total_steps < intervals)
    throw PartitionError("K = " + std::to_string(intervals) + " exceeds L = " +
                         std::to_string(total_steps));
  TimePartition p;
  p.horizon = horizon;
  p.total_steps = total_steps;
  p.intervals = intervals;
  p.tau = horizon / total_steps;
  const int base = total_steps / intervals;
  const int extra = total_steps % intervals;
  p.first_node.push_back(0);
  for (int k = 0; k < intervals; ++k) {
    p.steps.push_back(base + (k < extra ? 1 : 0));
    p.first_node.push_back(p.first_node.back() + p.steps.back());
  }
  for (int node : p.first_node) p.boundaries.push_back(node * p.tau);
  p.boundaries.back() = horizon;
  return p;
}

std::string to_string(const BlockSignature& s) {
  const char* kind = s.kind == BlockKind::First ? "first" : s.kind == BlockKind::Last ? "last" : "interior";
  return std::string(kind) + "(m=" + std::to_string(s.steps) + ")";
}

SplitLayout make_layout(const TimePartition& partition, Index n) {
  SplitLayout layout;
  layout.n = n;
  layout.offsets.push_back(0);
  for (int m : partition.steps) {
    layout.blocks.push_back({n, m});
    layout.offsets.push_back(layout.offsets.back() + layout.blocks.back().size());
  }
  return layout;
}

namespace detail {

SparseMatrix output_gram(const LtiModel& model) {
  SparseMatrix G = SparseMatrix(model.C.transpose()) * model.C;
  G.makeCompressed();
  return G;
}

SparseMatrix control_gram(const LtiModel& model) {
  // B B^T / alpha: the control penalty is absorbed into a rescaled B.
  SparseMatrix G = (model.B * SparseMatrix(model.B.transpose())) / model.alpha;
  G.makeCompressed();
  return G;
}

SparseMatrix assemble_stencil(const SparseMatrix& A, const SparseMatrix& output_gram,
                              const SparseMatrix& control_gram, double tau, int steps,
                              StencilOptions options) {
  const Index n = A.rows();
  const BlockLayout b{n, steps};
  const Index size = options.aux_slots ? b.size() : b.trajectory_size();
  const double inv_tau = 1.0 / tau;
  const SparseMatrix At = A.transpose();
  const int m = steps;

  Triplets t;
  t.reserve(static_cast<std::size_t>(
      m * (output_gram.nonZeros() + control_gram.nonZeros() + 2 * A.nonZeros() + 4 * n) + 4 * n));

  // Adjoint rows: -C^T C x_j + (lambda_j - lambda_{j-1}) / tau + A^T lambda_{j-1}.
  for (int j = 1; j <= m; ++j) {
    const Index row = b.x(j);
    add_block(t, row, b.x(j), output_gram, -1.0);
    add_identity(t, row, b.lambda(j - 1), n, -inv_tau);
    add_block(t, row, b.lambda(j - 1), At, 1.0);
    if (j < m) add_identity(t, row, b.lambda(j), n, inv_tau);
    else if (options.right_input && options.aux_slots) add_identity(t, row, b.vlambda(), n, inv_tau);
  }
  // State rows: (x_{j+1} - x_j) / tau - A x_{j+1} - B B^T lambda_j.
  for (int j = 0; j < m; ++j) {
    const Index row = b.lambda(j);
    add_identity(t, row, b.x(j + 1), n, inv_tau);
    add_block(t, row, b.x(j + 1), A, -1.0);
    add_block(t, row, b.lambda(j), control_gram, -1.0);
    if (j > 0) add_identity(t, row, b.x(j), n, -inv_tau);
    else if (options.left_input && options.aux_slots) add_identity(t, row, b.vx(), n, -inv_tau);
  }
  if (options.aux_slots) {
    if (options.left_input) add_identity(t, b.vx(), b.lambda(0), n, 1.0);
    if (options.right_input) add_identity(t, b.vlambda(), b.x(m), n, -1.0);
  }

  SparseMatrix M(size, size);
  M.setFromTriplets(t.begin(), t.end());
  M.makeCompressed();
  return M;
}

}  // namespace detail

SparseMatrix assemble_block(const LtiModel& model, const TimePartition& partition, int k) {
  check_interval(partition, k);
  const BlockKind kind = kind_of(k, partition.intervals);
  detail::StencilOptions opts;
  opts.left_input = kind != BlockKind::First;
  opts.right_input = kind != BlockKind::Last;
  return detail::assemble_stencil(model.A, detail::output_gram(model), detail::control_gram(model),
                                  partition.tau, partition.steps[static_cast<std::size_t>(k)], opts);
}

SparseMatrix assemble_coupling(const TimePartition& partition, Index n) {
  const SplitLayout layout = make_layout(partition, n);
  Triplets t;
  for (int k = 0; k < partition.intervals; ++k) {
    const Index off = layout.offsets[k];
    const auto& b = layout.blocks[k];
    if (k > 0) {
      const Index prev = layout.offsets[k - 1] + layout.blocks[k - 1].vlambda();
      add_identity(t, off + b.vx(), prev, n, -1.0);
    }
    if (k + 1 < partition.intervals) {
      const Index next = layout.offsets[k + 1] + layout.blocks[k + 1].vx();
      add_identity(t, off + b.vlambda(), next, n, 1.0);
    }
  }
  SparseMatrix N(layout.size(), layout.size());
  N.setFromTriplets(t.begin(), t.end());
  N.makeCompressed();
  return N;
}

Vector assemble_rhs(const LtiModel& model, const TimePartition& partition) {
  const Index n = model.state_dim();
  const SplitLayout layout = make_layout(partition, n);
  Vector g = Vector::Zero(layout.size());
  IterateView view(layout, g);
  if (!model.y_ref.is_zero()) {
    std::vector<double> times;
    for (int node = 1; node <= partition.total_steps; ++node) times.push_back(partition.node_time(node));
    const Matrix y = reference_samples(model, times, partition.horizon);
    const SparseMatrix Ct = model.C.transpose();
    for (int k = 0; k < partition.intervals; ++k)
      for (int j = 1; j <= partition.steps[static_cast<std::size_t>(k)]; ++j) {
        const int node = partition.first_node[static_cast<std::size_t>(k)] + j;
        view.x(k, j) = -(Ct * y.col(node - 1));
      }
  }
  view.lambda(0, 0) += model.x0 / partition.tau;
  return g;
}

Vector assemble_weights(const TimePartition& partition, Index n) {
  const SplitLayout layout = make_layout(partition, n);
  Vector w(layout.size());
  for (int k = 0; k < layout.intervals(); ++k) {
    const auto& b = layout.blocks[k];
    w.segment(layout.offsets[k], b.trajectory_size()).setConstant(partition.tau);
    w.segment(layout.offsets[k] + b.vx(), 2 * n).setOnes();
  }
  return w;
}

AssembledSystem assemble_system(const LtiModel& model, const TimePartition& partition) {
  AssembledSystem sys;
  sys.partition = partition;
  sys.layout = make_layout(partition, model.state_dim());
  sys.output_gram = detail::output_gram(model);
  sys.control_gram = detail::control_gram(model);
  for (int k = 0; k < partition.intervals; ++k) {
    const BlockSignature sig{kind_of(k, partition.intervals), partition.steps[static_cast<std::size_t>(k)]};
    sys.signatures.push_back(sig);
    // Equal signatures give identical operators; reuse the earlier assembly.
    bool reused = false;
    for (int prev = 0; prev < k && !reused; ++prev)
      if (sys.signatures[static_cast<std::size_t>(prev)] == sig) {
        sys.blocks.push_back(sys.blocks[static_cast<std::size_t>(prev)]);
        reused = true;
      }
    if (reused) continue;
    detail::StencilOptions opts;
    opts.left_input = sig.kind != BlockKind::First;
    opts.right_input = sig.kind != BlockKind::Last;
    sys.blocks.push_back(detail::assemble_stencil(model.A, sys.output_gram, sys.control_gram,
                                                  partition.tau, sig.steps, opts));
  }
  sys.coupling = assemble_coupling(partition, model.state_dim());
  sys.rhs = assemble_rhs(model, partition);
  sys.weights = assemble_weights(partition, model.state_dim());
  return sys;
}

double inner_product(const Vector& a, const Vector& b, const Vector& weights) {
  if (a.size() != b.size() || a.size() != weights.size())
    throw std::invalid_argument("inner_product: dimension mismatch (" + std::to_string(a.size()) +
                                "," + std::to_string(b.size()) + ")");
  return (weights.array() * a.array() * b.array()).sum();
}

double weighted_norm(const Vector& a, const Vector& weights) {
  return std::sqrt(inner_product(a, a, weights));
}

Vector restrict_to_intervals(const Matrix& x, const Matrix& lambda, const TimePartition& partition) {
  const Index nodes = partition.total_steps + 1;
  if (x.cols() != nodes || lambda.cols() != nodes || x.rows() != lambda.rows())
    throw std::invalid_argument("restrict: trajectories must be n x (L+1)");
  const Index n = x.rows();
  const SplitLayout layout = make_layout(partition, n);
  Vector z = Vector::Zero(layout.size());
  IterateView view(layout, z);
  for (int k = 0; k < partition.intervals; ++k) {
    const int first = partition.first_node[static_cast<std::size_t>(k)];
    const int m = partition.steps[static_cast<std::size_t>(k)];
    for (int j = 1; j <= m; ++j) view.x(k, j) = x.col(first + j);
    for (int j = 0; j < m; ++j) view.lambda(k, j) = lambda.col(first + j);
    if (k > 0) view.vx(k) = x.col(first);
    if (k + 1 < partition.intervals) view.vlambda(k) = lambda.col(first + m);
  }
  return z;
}

Trajectories concatenate(const Vector& z, const TimePartition& partition, const Vector& x0) {
  const Index n = x0.size();
  const SplitLayout layout = make_layout(partition, n);
  if (z.size() != layout.size())
    throw std::invalid_argument("concatenate: iterate has length " + std::to_string(z.size()) +
                                ", expected " + std::to_string(layout.size()));
  ConstIterateView view(layout, z);
  Trajectories tr{Matrix::Zero(n, partition.total_steps + 1), Matrix::Zero(n, partition.total_steps + 1)};
  tr.x.col(0) = x0;
  for (int k = 0; k < partition.intervals; ++k) {
    const int first = partition.first_node[static_cast<std::size_t>(k)];
    const int m = partition.steps[static_cast<std::size_t>(k)];
    for (int j = 1; j <= m; ++j) tr.x.col(first + j) = view.x(k, j);
    for (int j = 0; j < m; ++j) tr.lambda.col(first + j) = view.lambda(k, j);
  }
  for (int k = 1; k < partition.intervals; ++k) {
    const int node = partition.first_node[static_cast<std::size_t>(k)];
    tr.x.col(node) = view.vx(k);
    tr.lambda.col(node) = view.vlambda(k - 1);
  }
  return tr;
}

}  // namespace tdsplit
