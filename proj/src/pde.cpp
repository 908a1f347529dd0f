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
#include "tdsplit/pde.hpp"

#include <cmath>
#include <string>

namespace tdsplit {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(Index rows, Index cols, const Triplets& t) {
  SparseMatrix M(rows, cols);
  M.setFromTriplets(t.begin(), t.end());
  M.makeCompressed();
  return M;
}

Index count_true(const SubdomainMask& mask) {
  Index c = 0;
  for (bool b : mask) c += b ? 1 : 0;
  return c;
}

void check_mask(const SubdomainMask& mask, Index expected, const char* what) {
  if (static_cast<Index>(mask.size()) != expected)
    throw ModelError(std::string(what) + " mask has length " + std::to_string(mask.size()) +
                     ", expected " + std::to_string(expected));
  if (count_true(mask) == 0) throw ModelError(std::string(what) + " mask is empty");
}

}  // namespace

GridSpec GridSpec::make(std::vector<int> cells_per_axis) {
  if (cells_per_axis.empty() || cells_per_axis.size() > 3)
    throw ModelError("grid dimension must be 1, 2 or 3");
  GridSpec g;
  g.dim = static_cast<int>(cells_per_axis.size());
  g.cells = {1, 1, 1};
  for (std::size_t a = 0; a < cells_per_axis.size(); ++a) {
    if (cells_per_axis[a] < 2) throw ModelError("grid needs at least 2 cells per axis");
    g.cells[a] = cells_per_axis[a];
  }
  return g;
}

Index GridSpec::cell_count() const {
  Index c = 1;
  for (int a = 0; a < dim; ++a) c *= cells[static_cast<std::size_t>(a)];
  return c;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing(a);
  return v;
}

std::array<double, 3> GridSpec::cell_center(Index cell) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    const auto n = cells[static_cast<std::size_t>(a)];
    x[static_cast<std::size_t>(a)] = (static_cast<double>(cell % n) + 0.5) * spacing(a);
    cell /= n;
  }
  return x;
}

SubdomainMask cell_mask(const GridSpec& grid, const std::function<bool(const Point&)>& inside) {
  SubdomainMask mask(static_cast<std::size_t>(grid.cell_count()));
  for (Index c = 0; c < grid.cell_count(); ++c)
    mask[static_cast<std::size_t>(c)] = inside(grid.cell_center(c));
  return mask;
}

SubdomainMask full_mask(const GridSpec& grid) {
  return SubdomainMask(static_cast<std::size_t>(grid.cell_count()), true);
}

std::pair<SubdomainMask, SubdomainMask> heat_split_masks(const GridSpec& grid) {
  return {cell_mask(grid, [](const Point& x) { return x[0] <= 0.5; }),
          cell_mask(grid, [](const Point& x) { return x[0] >= 0.5; })};
}

LtiModel build_heat(const GridSpec& grid, const SubdomainMask& control_mask,
                    const SubdomainMask& observation_mask, double alpha,
                    HeatScaling scaling) {
  const Index n = grid.cell_count();
  check_mask(control_mask, n, "control");
  check_mask(observation_mask, n, "observation");

  Triplets a;
  a.reserve(static_cast<std::size_t>(n * (2 * grid.dim + 1)));
  Index stride = 1;
  for (int axis = 0; axis < grid.dim; ++axis) {
    const int cells = grid.cells[static_cast<std::size_t>(axis)];
    // 1/h^2 = cells^2 is an exact integer, so rows sum to exactly zero.
    const double w = static_cast<double>(cells) * cells;
    for (Index c = 0; c < n; ++c) {
      const auto i = (c / stride) % cells;
      // Mirrored ghost cells drop the flux through boundary faces.
      if (i > 0) {
        a.emplace_back(c, c - stride, w);
        a.emplace_back(c, c, -w);
      }
      if (i + 1 < cells) {
        a.emplace_back(c, c + stride, w);
        a.emplace_back(c, c, -w);
      }
    }
    stride *= cells;
  }

  Triplets b, cobs;
  Index col = 0, row = 0;
  const double weight = scaling == HeatScaling::Unit ? 1.0 : std::sqrt(grid.cell_volume());
  for (Index c = 0; c < n; ++c) {
    if (control_mask[static_cast<std::size_t>(c)]) b.emplace_back(c, col++, 1.0);
    if (observation_mask[static_cast<std::size_t>(c)]) cobs.emplace_back(row++, c, weight);
  }
  return make_model(from_triplets(n, n, a), from_triplets(n, col, b), from_triplets(row, n, cobs),
                    alpha, Vector::Ones(n));
}

LtiModel build_wave(const GridSpec& grid, double rho, WaveSetting setting, double alpha) {
  if (grid.dim != 2) throw ModelError("the wave builder needs a 2D grid");
  if (!(rho >= 0.0)) throw ModelError("rho must be nonnegative");
  const WaveLayout L{grid.cells[0], grid.cells[1]};
  const Index n = L.state_dim();
  const double hx = grid.spacing(0);
  const double hy = grid.spacing(1);
  const double inv_hx = L.nx;
  const double inv_hy = L.ny;

  // Divergence from interior faces to cells.
  Triplets d;
  for (int j = 0; j < L.ny; ++j)
    for (int i = 0; i + 1 < L.nx; ++i) {
      const Index f = L.qx(i, j) - L.pressure_count();
      d.emplace_back(L.p(i, j), f, inv_hx);
      d.emplace_back(L.p(i + 1, j), f, -inv_hx);
    }
  for (int j = 0; j + 1 < L.ny; ++j)
    for (int i = 0; i < L.nx; ++i) {
      const Index f = L.qy(i, j) - L.pressure_count();
      d.emplace_back(L.p(i, j), f, inv_hy);
      d.emplace_back(L.p(i, j + 1), f, -inv_hy);
    }
  const Index faces = L.xface_count() + L.yface_count();
  const SparseMatrix D = from_triplets(L.pressure_count(), faces, d);
  const SparseMatrix G = -SparseMatrix(D.transpose());

  Triplets a;
  for (Index c = 0; c < L.pressure_count(); ++c)
    if (rho != 0.0) a.emplace_back(c, c, -rho);
  for (Index k = 0; k < D.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(D, k); it; ++it)
      a.emplace_back(it.row(), L.pressure_count() + it.col(), it.value());
  for (Index k = 0; k < G.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(G, k); it; ++it)
      a.emplace_back(L.pressure_count() + it.row(), it.col(), it.value());

  SparseMatrix B, C;
  if (setting == WaveSetting::FullDomain) {
    B.resize(n, n);
    B.setIdentity();
    C = B;
  } else {
    Triplets b, c;
    Index col = 0;
    for (int j = 0; j < L.ny; ++j)
      for (int i = 0; i < L.nx; ++i) {
        const double x = (i + 0.5) * hx, y = (j + 0.5) * hy;
        if (!(x >= 0.5 && y >= 0.5)) b.emplace_back(L.p(i, j), col++, 1.0);
      }
    Index row = 0;
    auto observe = [&](double x, double y, Index dof) {
      if (!(x <= 0.5 && y <= 0.5)) c.emplace_back(row++, dof, 1.0);
    };
    for (int j = 0; j < L.ny; ++j)
      for (int i = 0; i + 1 < L.nx; ++i) observe((i + 1) * hx, (j + 0.5) * hy, L.qx(i, j));
    for (int j = 0; j + 1 < L.ny; ++j)
      for (int i = 0; i < L.nx; ++i) observe((i + 0.5) * hx, (j + 1) * hy, L.qy(i, j));
    if (col == 0 || row == 0) throw ModelError("wave control or observation domain is empty");
    B = from_triplets(n, col, b);
    C = from_triplets(row, n, c);
  }
  return make_model(from_triplets(n, n, a), std::move(B), std::move(C), alpha, Vector::Ones(n));
}

}  // namespace tdsplit
