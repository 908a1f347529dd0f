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

#include <random>

#include "oracles.hpp"
#include "tdsplit/pde.hpp"

using namespace tdsplit;

TEST_CASE("1D heat Laplacian on three cells") {
  const GridSpec g = GridSpec::make({3});
  const LtiModel m = build_heat(g, full_mask(g), full_mask(g), 1.0);
  Matrix expected(3, 3);
  expected << -9, 9, 0,
               9, -18, 9,
               0, 9, -9;
  CHECK(Matrix(m.A) == expected);
  CHECK(m.x0 == Vector::Ones(3));
  CHECK(Matrix(m.B) == Matrix::Identity(3, 3));
  CHECK(Matrix(m.C).isApprox(std::sqrt(1.0 / 3.0) * Matrix::Identity(3, 3)));
}

TEST_CASE("unit heat scaling changes only the observation weights") {
  const GridSpec g = GridSpec::make({4, 3});
  const auto [c, o] = heat_split_masks(g);
  const LtiModel vol = build_heat(g, c, o, 1.0);
  const LtiModel unit = build_heat(g, c, o, 1.0, HeatScaling::Unit);
  CHECK(Matrix(unit.A) == Matrix(vol.A));
  CHECK(Matrix(unit.B) == Matrix(vol.B));
  CHECK(Matrix(unit.C).isApprox(Matrix(vol.C) / std::sqrt(g.cell_volume()), 1e-15));
  CHECK(Matrix(unit.C).sum() == static_cast<double>(unit.output_dim()));
}

TEST_CASE("heat Laplacian rows sum to zero in every dimension") {
  for (const auto& cells : std::vector<std::vector<int>>{{7}, {4, 5}, {3, 4, 2}}) {
    const GridSpec g = GridSpec::make(cells);
    const LtiModel m = build_heat(g, full_mask(g), full_mask(g), 1.0);
    const Vector row_sums = m.A * Vector::Ones(m.state_dim());
    CHECK(row_sums.isZero(0.0));
  }
}

TEST_CASE("heat A is symmetric negative semidefinite") {
  const GridSpec g = GridSpec::make({5, 4});
  const auto [c, o] = heat_split_masks(g);
  const LtiModel m = build_heat(g, c, o, 1.0);
  CHECK(Matrix(m.A) == Matrix(SparseMatrix(m.A.transpose())));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int s = 0; s < 100; ++s) {
    Vector z(m.state_dim());
    for (auto& v : z) v = nd(rng);
    CHECK(z.dot(m.A * z) <= 1e-12 * z.squaredNorm());
  }
}

TEST_CASE("heat split masks on a 4x4x4 grid") {
  const GridSpec g = GridSpec::make({4, 4, 4});
  const auto [c, o] = heat_split_masks(g);
  const LtiModel m = build_heat(g, c, o, 1.0);
  // Oracle: enumerate cell centers directly.
  int left = 0;
  int right = 0;
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) {
        const double x = (i + 0.5) / 4.0;
        left += x <= 0.5;
        right += x >= 0.5;
      }
  CHECK(m.control_dim() == left);
  CHECK(m.output_dim() == right);
  CHECK(left == 32);
}

TEST_CASE("wave without friction is exactly skew") {
  const LtiModel m = build_wave(GridSpec::make({5, 6}), 0.0, WaveSetting::FullDomain, 0.1);
  const Matrix A = Matrix(m.A);
  CHECK((A + A.transpose()).isZero(0.0));
  CHECK(m.state_dim() == 30 + 4 * 6 + 5 * 5);
  CHECK(m.state_dim() == 30 + oracles::interior_face_count(5, 6));
}

TEST_CASE("wave friction shows up only on momentum rows") {
  const LtiModel m = build_wave(GridSpec::make({4, 4}), 0.5, WaveSetting::FullDomain, 0.1);
  const Matrix A = Matrix(m.A);
  const Matrix sym = 0.5 * (A + A.transpose());
  const WaveLayout lay{4, 4};
  Matrix expected = Matrix::Zero(lay.state_dim(), lay.state_dim());
  expected.topLeftCorner(16, 16) = -0.5 * Matrix::Identity(16, 16);
  CHECK(sym == expected);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (int s = 0; s < 50; ++s) {
    Vector z(m.state_dim());
    for (auto& v : z) v = nd(rng);
    CHECK(z.dot(m.A * z) <= 0.0);
  }
}

TEST_CASE("2x2 wave grid state size") {
  const LtiModel m = build_wave(GridSpec::make({2, 2}), 0.0, WaveSetting::FullDomain, 1.0);
  CHECK(m.state_dim() == 8);
  CHECK(m.state_dim() == 4 + oracles::interior_face_count(2, 2));
  CHECK(Matrix(m.B) == Matrix::Identity(8, 8));
  CHECK(Matrix(m.C) == Matrix::Identity(8, 8));
}

TEST_CASE("wave setting 2 supports") {
  const int nx = 6;
  const int ny = 6;
  const LtiModel m = build_wave(GridSpec::make({nx, ny}), 0.0, WaveSetting::ForceAndStrain, 0.1);
  const WaveLayout lay{nx, ny};
  const Matrix B = Matrix(m.B);
  const Matrix C = Matrix(m.C);

  // Controlled rows: momentum cells outside the upper-right quarter.
  Vector driven = B.rowwise().sum();
  Index expected_controls = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = (i + 0.5) / nx;
      const double y = (j + 0.5) / ny;
      const bool inside = x >= 0.5 && y >= 0.5;
      CHECK(driven[lay.p(i, j)] == (inside ? 0.0 : 1.0));
      expected_controls += !inside;
    }
  CHECK(m.control_dim() == expected_controls);
  CHECK(driven.tail(lay.state_dim() - lay.pressure_count()).isZero(0.0));

  // Observed columns are strain faces only.
  const Vector seen = C.colwise().sum().transpose();
  CHECK(seen.head(lay.pressure_count()).isZero(0.0));
  CHECK(seen.tail(lay.state_dim() - lay.pressure_count()).sum() == static_cast<double>(m.output_dim()));
  CHECK(m.output_dim() > 0);
}

TEST_CASE("pde builders reject bad input") {
  CHECK_THROWS_AS(build_wave(GridSpec::make({4, 4}), -1.0, WaveSetting::FullDomain, 0.1), ModelError);
  CHECK_THROWS_AS(build_wave(GridSpec::make({4}), 0.0, WaveSetting::FullDomain, 0.1), ModelError);
  CHECK_THROWS_AS(GridSpec::make({1}), ModelError);
  CHECK_THROWS_AS(GridSpec::make({}), ModelError);
  const GridSpec g = GridSpec::make({4});
  SubdomainMask none(4, false);
  CHECK_THROWS_AS(build_heat(g, none, full_mask(g), 1.0), ModelError);
  CHECK_THROWS_AS(build_heat(g, SubdomainMask(3, true), full_mask(g), 1.0), ModelError);
}
