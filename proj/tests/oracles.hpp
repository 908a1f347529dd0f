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
// Test-only reference computations. Nothing here calls into the sparse
// assembly or factorization paths of the library.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace oracles {

/// Scalar problem x' = u, x(0) = x0, cost tau*sum_{j=1..L} x_j^2 + tau*alpha*sum_{j<L} u_j^2
/// with implicit Euler x_{j+1} = x_j + tau u_j. Eliminates x and solves the
/// least-squares problem in u densely.
struct ScalarQp {
  Eigen::VectorXd u;  // u_0..u_{L-1}
  Eigen::VectorXd x;  // x_0..x_L
  double cost = 0.0;
};

inline ScalarQp scalar_reduced_qp(double x0, double alpha, double T, int L) {
  const double tau = T / L;
  // residual r = F u + f, rows: sqrt(tau) x_j (j=1..L), sqrt(tau alpha) u_j
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(2 * L, L);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * L);
  for (int j = 1; j <= L; ++j) {
    f[j - 1] = std::sqrt(tau) * x0;
    for (int i = 0; i < j; ++i) F(j - 1, i) = std::sqrt(tau) * tau;
  }
  for (int j = 0; j < L; ++j) F(L + j, j) = std::sqrt(tau * alpha);
  ScalarQp out;
  out.u = F.colPivHouseholderQr().solve(-f);
  out.x.resize(L + 1);
  out.x[0] = x0;
  for (int j = 0; j < L; ++j) out.x[j + 1] = out.x[j] + tau * out.u[j];
  out.cost = (F * out.u + f).squaredNorm();
  return out;
}

/// Dense evaluation of the Peaceman-Rachford map with explicit inverses.
inline Eigen::VectorXd dense_pr_map(const Eigen::MatrixXd& M, const Eigen::MatrixXd& N,
                                    const Eigen::VectorXd& g, double mu, const Eigen::VectorXd& z) {
  const Eigen::Index d = M.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd Rm = (mu * I - M).fullPivLu().inverse();
  const Eigen::MatrixXd Cn = (mu * I + N) * (mu * I - N).fullPivLu().inverse();
  return Rm * (Cn * (mu * I + M) * z - (Cn + I) * g);
}

/// Interior faces of an nx x ny cell grid: all faces minus the boundary ones.
inline long interior_face_count(int nx, int ny) {
  long count = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i)
      if (i != 0 && i != nx) ++count;  // vertical faces
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (j != 0 && j != ny) ++count;  // horizontal faces
  return count;
}

}  // namespace oracles
