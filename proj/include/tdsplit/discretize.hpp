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
#ifndef TDSPLIT_DISCRETIZE_HPP
#define TDSPLIT_DISCRETIZE_HPP

#include <compare>
#include <stdexcept>
#include <vector>

#include "tdsplit/model.hpp"

namespace tdsplit {

class PartitionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform time grid t_j = j * tau, j = 0..L, split into K consecutive
/// subintervals of steps[k] steps each. Intervals are indexed from 0.
struct TimePartition {
  double horizon = 0.0;
  int total_steps = 0;
  int intervals = 0;
  double tau = 0.0;
  std::vector<int> steps;          // m_k
  std::vector<int> first_node;     // global node index of t_k, size K + 1
  std::vector<double> boundaries;  // t_0 .. t_K

  double node_time(int node) const { return node * tau; }
};

/// Even split with remainder steps assigned to the earliest intervals.
/// Requires T > 0, K >= 2 and L >= K.
TimePartition make_partition(double horizon, int total_steps, int intervals);

enum class BlockKind { First, Interior, Last };

/// Blocks with equal signatures have identical operators.
struct BlockSignature {
  BlockKind kind = BlockKind::Interior;
  int steps = 0;
  auto operator<=>(const BlockSignature&) const = default;
};

std::string to_string(const BlockSignature& s);

/// Coordinate layout of one interval's unknowns
///   (x_1..x_m, lambda_0..lambda_{m-1}, v_x, v_lambda).
struct BlockLayout {
  Index n = 0;
  int steps = 0;

  Index size() const { return 2 * n * steps + 2 * n; }
  Index trajectory_size() const { return 2 * n * steps; }
  Index x(int j) const { return (j - 1) * n; }                // j = 1..m
  Index lambda(int j) const { return n * steps + j * n; }     // j = 0..m-1
  Index vx() const { return 2 * n * steps; }
  Index vlambda() const { return 2 * n * steps + n; }
};

/// Flattened layout of the split iterate z = (z_1, ..., z_K).
struct SplitLayout {
  Index n = 0;
  std::vector<BlockLayout> blocks;
  std::vector<Index> offsets;  // size K + 1

  Index size() const { return offsets.back(); }
  int intervals() const { return static_cast<int>(blocks.size()); }
};

SplitLayout make_layout(const TimePartition& partition, Index n);

/// Block-diagonal dissipative part, skew coupling and data of the split
/// optimality system (M + N) z = g, with the weighted inner product
/// <a, b>_W = sum_i W_i a_i b_i (tau on trajectory samples, 1 on v slots).
struct AssembledSystem {
  TimePartition partition;
  SplitLayout layout;
  std::vector<BlockSignature> signatures;
  std::vector<SparseMatrix> blocks;
  SparseMatrix coupling;
  Vector rhs;
  Vector weights;
  SparseMatrix output_gram;   // C^T C
  SparseMatrix control_gram;  // B B^T / alpha

  Index size() const { return layout.size(); }
};

/// Helper for reading and writing per-interval slots of a flattened iterate.
template <class V>
class BasicIterateView {
 public:
  BasicIterateView(const SplitLayout& layout, V& z) : layout_(&layout), z_(&z) {}

  auto x(int k, int j) const { return seg(k, blk(k).x(j)); }
  auto lambda(int k, int j) const { return seg(k, blk(k).lambda(j)); }
  auto vx(int k) const { return seg(k, blk(k).vx()); }
  auto vlambda(int k) const { return seg(k, blk(k).vlambda()); }
  auto block(int k) const { return z_->segment(layout_->offsets[static_cast<std::size_t>(k)], blk(k).size()); }

 private:
  const BlockLayout& blk(int k) const { return layout_->blocks[static_cast<std::size_t>(k)]; }
  auto seg(int k, Index local) const {
    return z_->segment(layout_->offsets[static_cast<std::size_t>(k)] + local, layout_->n);
  }
  const SplitLayout* layout_;
  V* z_;
};

using IterateView = BasicIterateView<Vector>;
using ConstIterateView = BasicIterateView<const Vector>;

/// M_k for interval k (0-based): summation-by-parts implicit Euler pairing,
/// with boundary atoms folded into the first/last trajectory rows. The first
/// block has no v_x terms and the last no v_lambda terms.
/// With v_x = d and v_lambda = c fixed, the trajectory rows of M_k z = 0 are
/// the optimality system of the local problem on the interval: minimize
/// tau sum |C x_j|^2 + alpha tau sum |u_j|^2 - 2 <c, x_m> subject to the
/// implicit Euler state equation from x_0 = d, with u_j = B^T lambda_j / alpha.
SparseMatrix assemble_block(const LtiModel& model, const TimePartition& partition, int k);

/// Skew coupling: block k's v_x row reads -v_lambda of block k-1; block k's
/// v_lambda row reads +v_x of block k+1.
SparseMatrix assemble_coupling(const TimePartition& partition, Index n);

/// Right-hand side: -C^T y_ref at every x_{k,j} slot (right endpoint sampling)
/// and x0 / tau at the lambda_{1,0} slot of the first block.
Vector assemble_rhs(const LtiModel& model, const TimePartition& partition);

Vector assemble_weights(const TimePartition& partition, Index n);

AssembledSystem assemble_system(const LtiModel& model, const TimePartition& partition);

double inner_product(const Vector& a, const Vector& b, const Vector& weights);
double weighted_norm(const Vector& a, const Vector& weights);

/// Global trajectories sampled at nodes 0..L (columns).
struct Trajectories {
  Matrix x;
  Matrix lambda;
};

/// Splits global trajectories into interval slots. v_{k,x} takes x at the
/// left boundary node and v_{k,lambda} takes lambda at the right boundary
/// node; the first block's v_x and last block's v_lambda stay zero.
Vector restrict_to_intervals(const Matrix& x, const Matrix& lambda,
                             const TimePartition& partition);

/// Stitches a split iterate into global trajectories. Shared nodes t_k take
/// the auxiliary values (v_{k+1,x} for the state, v_{k,lambda} for the
/// adjoint); node 0 takes x0 and lambda(T) = 0.
Trajectories concatenate(const Vector& z, const TimePartition& partition, const Vector& x0);

/// Operator pieces used by assembly and by the monolithic baseline.
namespace detail {

struct StencilOptions {
  bool left_input = true;    // v_x enters the lambda_0 row
  bool right_input = true;   // v_lambda enters the x_m row
  bool aux_slots = true;     // v_x / v_lambda coordinates present
};

SparseMatrix assemble_stencil(const SparseMatrix& A, const SparseMatrix& output_gram,
                              const SparseMatrix& control_gram, double tau, int steps,
                              StencilOptions options);

SparseMatrix output_gram(const LtiModel& model);
SparseMatrix control_gram(const LtiModel& model);

}  // namespace detail

}  // namespace tdsplit

#endif  // TDSPLIT_DISCRETIZE_HPP
