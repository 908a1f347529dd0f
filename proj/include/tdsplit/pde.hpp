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
#ifndef TDSPLIT_PDE_HPP
#define TDSPLIT_PDE_HPP

#include <array>
#include <functional>
#include <vector>

#include "tdsplit/model.hpp"

namespace tdsplit {

/// Uniform cell-centered grid on the unit box (0,1)^dim. Cells are
/// numbered lexicographically with axis 0 fastest.
struct GridSpec {
  int dim = 1;
  std::array<int, 3> cells{2, 1, 1};

  static GridSpec make(std::vector<int> cells_per_axis);

  Index cell_count() const;
  double spacing(int axis) const { return 1.0 / cells[static_cast<std::size_t>(axis)]; }
  double cell_volume() const;
  std::array<double, 3> cell_center(Index cell) const;
};

/// Boolean selector over degrees of freedom.
using SubdomainMask = std::vector<bool>;

using Point = std::array<double, 3>;

SubdomainMask cell_mask(const GridSpec& grid, const std::function<bool(const Point&)>& inside);
SubdomainMask full_mask(const GridSpec& grid);

enum class HeatScaling {
  CellVolume,  // C entries sqrt(cell volume): output norms approximate L2 of nodal values
  Unit,        // C entries 1: unknowns read as sqrt(cell volume)-scaled values
};

/// Heat equation x' = Laplace x + chi_c u with homogeneous Neumann boundary.
/// A is the mirrored-ghost finite-difference Laplacian, B injects into the
/// control cells, C observes the observation cells weighted according to
/// `scaling`; x0 is all ones.
LtiModel build_heat(const GridSpec& grid, const SubdomainMask& control_mask,
                    const SubdomainMask& observation_mask, double alpha,
                    HeatScaling scaling = HeatScaling::CellVolume);

/// Heat "split" configuration: control on x_1 <= 0.5, observation on x_1 >= 0.5.
std::pair<SubdomainMask, SubdomainMask> heat_split_masks(const GridSpec& grid);

enum class WaveSetting {
  FullDomain = 1,        // B = C = I on (p, q)
  ForceAndStrain = 2,    // control p on Omega \ [0.5,1]^2, observe q on Omega \ [0,0.5]^2
};

/// Staggered (MAC) layout of the 2D wave state (p, q_x, q_y).
struct WaveLayout {
  int nx = 0;
  int ny = 0;

  Index pressure_count() const { return Index{nx} * ny; }
  Index xface_count() const { return Index{nx - 1} * ny; }
  Index yface_count() const { return Index{nx} * (ny - 1); }
  Index state_dim() const { return pressure_count() + xface_count() + yface_count(); }

  Index p(int i, int j) const { return Index{j} * nx + i; }
  // x-face between cells (i, j) and (i + 1, j)
  Index qx(int i, int j) const { return pressure_count() + Index{j} * (nx - 1) + i; }
  // y-face between cells (i, j) and (i, j + 1)
  Index qy(int i, int j) const { return pressure_count() + xface_count() + Index{j} * nx + i; }
};

/// Wave equation in momentum/strain form, p' = div q - rho p, q' = grad p,
/// with zero normal strain on the boundary. Momentum lives on cell centers,
/// strain on interior faces; boundary-normal faces are eliminated. The
/// gradient is assembled as the negative transpose of the divergence, so
/// rho = 0 gives an exactly skew-symmetric A.
LtiModel build_wave(const GridSpec& grid, double rho, WaveSetting setting, double alpha);

}  // namespace tdsplit

#endif  // TDSPLIT_PDE_HPP
