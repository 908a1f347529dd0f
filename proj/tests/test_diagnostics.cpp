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

#include <algorithm>

#include "test_helpers.hpp"
#include "tdsplit/diagnostics.hpp"
#include "tdsplit/pde.hpp"

using namespace tdsplit;

namespace {

AssembledSystem heat_system(int cells, int L, int K) {
  const GridSpec g = GridSpec::make({cells});
  const auto [c, o] = heat_split_masks(g);
  return assemble_system(build_heat(g, c, o, 0.2), make_partition(1.0, L, K));
}

}  // namespace

TEST_CASE("dissipation check") {
  AssembledSystem sys = heat_system(8, 12, 4);
  const auto ok = dissipation_check(sys, 5);
  CHECK(ok.passed);
  CHECK(ok.residual <= 1e-13);
  CHECK(ok.seed == kDefaultSeed);

  // Flip the sign of one control term in an interior block.
  const Index slot = sys.layout.blocks[1].lambda(0);
  sys.blocks[1].coeffRef(slot, slot) *= -1.0;
  const auto bad = dissipation_check(sys, 5);
  CHECK_FALSE(bad.passed);
  CHECK(bad.context.find("interior") != std::string::npos);
}

TEST_CASE("skew check catches a single broken entry") {
  AssembledSystem sys = heat_system(4, 6, 3);
  CHECK(skew_check(sys.coupling).passed);
  SparseMatrix N = sys.coupling;
  for (Index k = 0; k < N.outerSize(); ++k) {
    SparseMatrix::InnerIterator it(N, k);
    if (it) {
      it.valueRef() = 0.0;
      break;
    }
  }
  const auto r = skew_check(N);
  CHECK_FALSE(r.passed);
  CHECK(r.residual == 1.0);
}

TEST_CASE("Cayley ratios") {
  const AssembledSystem sys = heat_system(8, 12, 4);
  for (double mu : {0.5, 1.0, 20.0}) {
    const FactorSet f = factorize(sys, mu);
    for (std::uint64_t s = 0; s < 4; ++s) {
      const Vector z = random_vector(sys.size(), 40 + s);
      CHECK(cayley_ratio_N(sys, f, z) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(cayley_ratio_M(sys, f, z) <= 1.0 + 1e-12);
    }
    const auto c = contraction_check(sys, mu, 6);
    CHECK(c.block.passed);
    CHECK(c.coupling.passed);
  }

  SUBCASE("no observation and no control gives an isometry") {
    LtiModel m = test_helpers::scalar_model(0.0, 1.0);
    m.B = SparseMatrix(1, 1);
    m.C = SparseMatrix(1, 1);
    const auto s = assemble_system(m, make_partition(1.0, 6, 3));
    const FactorSet f = factorize(s, 1.0);
    CHECK(cayley_ratio_M(s, f, random_vector(s.size(), 8)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("auxiliary-only vectors see an isometry") {
    const FactorSet f = factorize(sys, 1.0);
    Vector z = Vector::Zero(sys.size());
    const auto& b = sys.layout.blocks[1];
    z.segment(sys.layout.offsets[1] + b.vx(), b.n).setOnes();
    // M on such z has only trajectory components; the ratio still cannot exceed 1.
    CHECK(cayley_ratio_M(sys, f, z) <= 1.0 + 1e-12);
  }
}

TEST_CASE("monotonicity check") {
  std::vector<IterationRecord> h(6);
  for (int i = 0; i < 6; ++i) {
    h[static_cast<std::size_t>(i)].iteration = i + 1;
    h[static_cast<std::size_t>(i)].delta_f = 1.0 / (i + 1);
  }
  const auto ok = monotonicity_check(h);
  CHECK(ok.passed);
  CHECK(ok.residual == 0.0);

  std::swap(h[2].delta_f, h[3].delta_f);
  const auto bad = monotonicity_check(h);
  CHECK_FALSE(bad.passed);
  CHECK(bad.context.find("iteration 4") != std::string::npos);

  const auto empty = monotonicity_check({});
  CHECK_FALSE(empty.passed);
}

TEST_CASE("error bound check") {
  std::vector<IterationRecord> h(3);
  for (int i = 0; i < 3; ++i) {
    h[static_cast<std::size_t>(i)].delta_f = 2.0;
    h[static_cast<std::size_t>(i)].error_w = 1.0;
  }
  CHECK(error_bound_check(h, 2.0).passed);
  CHECK_FALSE(error_bound_check(h, 4.0).passed);
}

TEST_CASE("fixed point check ignores nothing but spectators") {
  const AssembledSystem sys = heat_system(6, 8, 2);
  Vector z = Vector::Zero(sys.size());
  // Zero iterate leaves the data residual.
  CHECK_FALSE(fixed_point_check(sys, z, 1e-8).passed);
  // A spectator slot does not count.
  const auto& b0 = sys.layout.blocks[0];
  z.segment(b0.vx(), b0.n).setConstant(1e6);
  CHECK(fixed_point_check(sys, z, 1e-8).residual == fixed_point_check(sys, Vector::Zero(sys.size()), 1e-8).residual);
}
