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
#include <doctest.h>

#include "oracles.hpp"
#include "test_helpers.hpp"
#include "tdsplit/diagnostics.hpp"
#include "tdsplit/discretize.hpp"
#include "tdsplit/pde.hpp"
#include "tdsplit/solver.hpp"

using namespace tdsplit;
using test_helpers::scalar_model;

TEST_CASE("make_partition") {
  SUBCASE("even split") {
    const auto p = make_partition(5.0, 20, 5);
    CHECK(p.steps == std::vector<int>{4, 4, 4, 4, 4});
    CHECK(p.tau == 0.25);
    CHECK(p.first_node == std::vector<int>{0, 4, 8, 12, 16, 20});
    CHECK(p.boundaries.back() == 5.0);
  }
  SUBCASE("remainder goes to the earliest intervals") {
    const auto p = make_partition(1.0, 5, 2);
    CHECK(p.steps == std::vector<int>{3, 2});
    CHECK(p.first_node == std::vector<int>{0, 3, 5});
  }
  SUBCASE("invalid") {
    CHECK_THROWS_AS(make_partition(1.0, 3, 4), PartitionError);
    CHECK_THROWS_AS(make_partition(1.0, 3, 1), PartitionError);
    CHECK_THROWS_AS(make_partition(0.0, 3, 2), PartitionError);
  }
}

TEST_CASE("interior block on the smallest instance") {
  const LtiModel m = scalar_model(0.0, 1.0);
  const auto p = make_partition(3.0, 3, 3);
  const Matrix Mk = Matrix(assemble_block(m, p, 1));
  // ordering (x_1, lambda_0, v_x, v_lambda)
  Matrix expected(4, 4);
  expected << -1, -1, 0, 1,
               1, -1, -1, 0,
               0, 1, 0, 0,
              -1, 0, 0, 0;
  CHECK(Mk == expected);

  const Matrix first = Matrix(assemble_block(m, p, 0));
  CHECK(first.row(2).isZero(0.0));
  CHECK(first.col(2).isZero(0.0));
  const Matrix last = Matrix(assemble_block(m, p, 2));
  CHECK(last.row(3).isZero(0.0));
  CHECK(last.col(3).isZero(0.0));
  CHECK_THROWS_AS(assemble_block(m, p, 3), PartitionError);
}

TEST_CASE("block pairing vanishes on auxiliary-only vectors") {
  const GridSpec g = GridSpec::make({6});
  const LtiModel m = build_heat(g, full_mask(g), full_mask(g), 0.5);
  const auto p = make_partition(1.0, 12, 3);
  const auto sys = assemble_system(m, p);
  const BlockLayout& lay = sys.layout.blocks[1];
  Vector z = Vector::Zero(lay.size());
  z.segment(lay.vx(), lay.n) = random_vector(lay.n, 1);
  z.segment(lay.vlambda(), lay.n) = random_vector(lay.n, 2);
  const Vector w = sys.weights.segment(sys.layout.offsets[1], lay.size());
  CHECK(inner_product(z, sys.blocks[1] * z, w) == 0.0);
}

TEST_CASE("coupling for two scalar intervals") {
  const auto p = make_partition(1.0, 2, 2);
  const Matrix N = Matrix(assemble_coupling(p, 1));
  CHECK(N.rows() == 8);
  CHECK(N(3, 6) == 1.0);
  CHECK(N(6, 3) == -1.0);
  CHECK(N.cwiseAbs().sum() == 2.0);
  Matrix sq = Matrix::Zero(8, 8);
  sq(3, 3) = -1.0;
  sq(6, 6) = -1.0;
  CHECK(N * N == sq);
  CHECK((N + N.transpose()).isZero(0.0));
}

TEST_CASE("coupling is skew for larger partitions") {
  const auto p = make_partition(2.0, 17, 6);
  const SparseMatrix N = assemble_coupling(p, 3);
  CHECK(skew_check(N).passed);
  CHECK(skew_check(N).residual == 0.0);
}

TEST_CASE("right-hand side") {
  SUBCASE("zero data gives zero") {
    const auto p = make_partition(1.0, 4, 2);
    CHECK(assemble_rhs(scalar_model(0.0, 1.0, 0.0), p).isZero(0.0));
  }
  SUBCASE("initial state enters the first adjoint slot") {
    const auto p = make_partition(1.0, 2, 2);
    const Vector g = assemble_rhs(scalar_model(0.0, 1.0, 1.0), p);
    Vector expected = Vector::Zero(8);
    expected[1] = 2.0;
    CHECK(g == expected);
  }
  SUBCASE("constant reference enters every state slot") {
    LtiModel m = scalar_model(0.0, 1.0, 0.0);
    m.y_ref.times = {0.0};
    m.y_ref.values = Matrix::Ones(1, 1);
    const auto p = make_partition(1.0, 6, 3);
    const auto layout = make_layout(p, 1);
    const Vector g = assemble_rhs(m, p);
    ConstIterateView view(layout, g);
    double total = 0.0;
    for (int k = 0; k < 3; ++k)
      for (int j = 1; j <= p.steps[static_cast<std::size_t>(k)]; ++j) {
        CHECK(view.x(k, j)[0] == -1.0);
        total += view.x(k, j)[0];
      }
    CHECK(g.sum() == total);
  }
}

TEST_CASE("weighted inner product") {
  const auto p = make_partition(1.0, 4, 2);
  const Vector w = assemble_weights(p, 2);
  const auto layout = make_layout(p, 2);
  for (int k = 0; k < 2; ++k) {
    const auto& b = layout.blocks[static_cast<std::size_t>(k)];
    const Index off = layout.offsets[static_cast<std::size_t>(k)];
    CHECK(w.segment(off, b.trajectory_size()).isConstant(0.25, 0.0));
    CHECK(w.segment(off + b.vx(), 2 * b.n).isConstant(1.0, 0.0));
  }
  const Vector a = random_vector(w.size(), 3);
  const Vector b = random_vector(w.size(), 4);
  const Vector c = random_vector(w.size(), 5);
  CHECK(inner_product(a, b, w) == doctest::Approx(inner_product(b, a, w)).epsilon(1e-15));
  CHECK(inner_product(2.0 * a + c, b, w) ==
        doctest::Approx(2.0 * inner_product(a, b, w) + inner_product(c, b, w)).epsilon(1e-13));
  CHECK(weighted_norm(a, w) * weighted_norm(a, w) == doctest::Approx(inner_product(a, a, w)));
  CHECK_THROWS_AS(inner_product(a, Vector::Zero(3), w), std::invalid_argument);
}

TEST_CASE("restriction and concatenation") {
  const auto p = make_partition(1.0, 7, 3);
  const Index n = 2;
  const auto layout = make_layout(p, n);

  SUBCASE("zero trajectories") {
    CHECK(restrict_to_intervals(Matrix::Zero(n, 8), Matrix::Zero(n, 8), p).isZero(0.0));
  }
  SUBCASE("constant trajectories leave only spectators zero") {
    const Vector z = restrict_to_intervals(Matrix::Ones(n, 8), Matrix::Ones(n, 8), p);
    ConstIterateView view(layout, z);
    CHECK(view.vx(0).isZero(0.0));
    CHECK(view.vlambda(2).isZero(0.0));
    CHECK(z.sum() == static_cast<double>(z.size() - 2 * n));
  }
  SUBCASE("round trip") {
    Matrix x = Matrix::Random(n, 8);
    Matrix lam = Matrix::Random(n, 8);
    lam.col(7).setZero();
    const Vector z = restrict_to_intervals(x, lam, p);
    const Trajectories t = concatenate(z, p, x.col(0));
    CHECK(t.x == x);
    CHECK(t.lambda == lam);
  }
}

TEST_CASE("resolvent of the block part is injective") {
  const GridSpec g = GridSpec::make({8});
  const LtiModel m = build_heat(g, full_mask(g), full_mask(g), 0.25);
  const auto sys = assemble_system(m, make_partition(1.0, 12, 4));
  for (double mu : {0.1, 1.0, 10.0}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Vector z = random_vector(sys.size(), 100 + s);
      Vector r = mu * z;
      for (int k = 0; k < sys.layout.intervals(); ++k) {
        const Index off = sys.layout.offsets[static_cast<std::size_t>(k)];
        const Index len = sys.layout.blocks[static_cast<std::size_t>(k)].size();
        r.segment(off, len) -= sys.blocks[static_cast<std::size_t>(k)] * z.segment(off, len);
      }
      CHECK(weighted_norm(r, sys.weights) >= mu * weighted_norm(z, sys.weights) * (1.0 - 1e-12));
    }
    CHECK(injectivity_check(sys, mu, 8).passed);
  }
}

TEST_CASE("restricted baseline satisfies the split system") {
  const GridSpec g = GridSpec::make({10});
  const auto [c, o] = heat_split_masks(g);
  LtiModel m = build_heat(g, c, o, 0.1);
  m.y_ref.times = {0.0, 1.0};
  m.y_ref.values.resize(m.output_dim(), 2);
  m.y_ref.values.col(0).setConstant(0.5);
  m.y_ref.values.col(1).setConstant(-0.5);
  const auto p = make_partition(1.0, 15, 4);
  const auto sys = assemble_system(m, p);
  const DirectSolution d = direct_solve(m, p);
  const Vector z = restrict_to_intervals(d.solution.trajectories.x, d.solution.trajectories.lambda, p);
  Vector Mz = Vector::Zero(z.size());
  for (int k = 0; k < 4; ++k) {
    const Index off = sys.layout.offsets[static_cast<std::size_t>(k)];
    const Index len = sys.layout.blocks[static_cast<std::size_t>(k)].size();
    Mz.segment(off, len) = sys.blocks[static_cast<std::size_t>(k)] * z.segment(off, len);
  }
  const Vector res = Mz + sys.coupling * z - sys.rhs;
  CHECK(res.lpNorm<Eigen::Infinity>() <= 1e-10 * std::max(1.0, sys.rhs.lpNorm<Eigen::Infinity>()));
  CHECK(fixed_point_check(sys, z, 1e-10).passed);
}

TEST_CASE("an interior block with fixed interface values is a local optimal control problem") {
  // With v_x = d and v_lambda = c held fixed, the trajectory rows of M_k = 0
  // are the optimality conditions of
  //   min tau sum_j |C x_j|^2 + alpha tau sum_j |u_j|^2 - 2 <c, x_m>
  //   s.t. (x_{j+1} - x_j) / tau = A x_{j+1} + B u_j, x_0 = d,
  // with u_j = B^T lambda_j / alpha.
  const GridSpec g = GridSpec::make({6});
  const auto [cm, om] = heat_split_masks(g);
  const LtiModel m = build_heat(g, cm, om, 0.3);
  const auto p = make_partition(1.0, 12, 3);
  const Matrix Mk = Matrix(assemble_block(m, p, 1));
  const BlockLayout lay = make_layout(p, m.state_dim()).blocks[1];
  const Index n = lay.n;
  const Index nt = lay.trajectory_size();
  const double tau = p.tau;

  Vector v(2 * n);
  v << random_vector(n, 61), random_vector(n, 62);
  const Vector zt = Mk.topLeftCorner(nt, nt).fullPivLu().solve(-Mk.topRightCorner(nt, 2 * n) * v);
  const Vector d = v.head(n);
  const Vector c = v.tail(n);

  Matrix u(m.control_dim(), lay.steps);
  for (int j = 0; j < lay.steps; ++j) u.col(j) = m.B.transpose() * zt.segment(lay.lambda(j), n) / m.alpha;

  const Matrix step = (Matrix::Identity(n, n) - tau * Matrix(m.A)).inverse();
  auto states = [&](const Matrix& uu) {
    Matrix x(n, lay.steps + 1);
    x.col(0) = d;
    for (int j = 0; j < lay.steps; ++j) x.col(j + 1) = step * (x.col(j) + tau * (m.B * uu.col(j)));
    return x;
  };
  auto J = [&](const Matrix& uu) {
    const Matrix x = states(uu);
    return tau * (m.C * x.rightCols(lay.steps)).squaredNorm() + m.alpha * tau * uu.squaredNorm() -
           2.0 * c.dot(x.col(lay.steps));
  };

  const Matrix x = states(u);
  for (int j = 1; j <= lay.steps; ++j)
    CHECK((x.col(j) - zt.segment(lay.x(j), n)).lpNorm<Eigen::Infinity>() <= 1e-12);

  const double base = J(u);
  for (std::uint64_t s = 0; s < 10; ++s) {
    Matrix dir(u.rows(), u.cols());
    dir.reshaped() = random_vector(u.size(), 500 + s);
    const double up = J(u + 1e-3 * dir) - base;
    const double down = J(u - 1e-3 * dir) - base;
    CHECK(up > 0.0);
    CHECK(down > 0.0);
    // No first-order term: the two sides agree to roundoff.
    CHECK(std::abs(up - down) <= 1e-8 * (up + down));
  }
}
