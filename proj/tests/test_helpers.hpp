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
#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "tdsplit/model.hpp"

namespace test_helpers {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(TDSPLIT_TEST_TMPDIR) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

inline tdsplit::SparseMatrix dense_to_sparse(const tdsplit::Matrix& M) {
  return M.sparseView(0.0, 0.0);
}

/// x' = a x + u, y = x, scalar model used across tests.
inline tdsplit::LtiModel scalar_model(double a = 0.0, double alpha = 1.0, double x0 = 1.0) {
  tdsplit::Matrix A(1, 1), B(1, 1), C(1, 1);
  A << a;
  B << 1.0;
  C << 1.0;
  tdsplit::Vector v(1);
  v << x0;
  return tdsplit::make_model(dense_to_sparse(A), dense_to_sparse(B), dense_to_sparse(C), alpha, v);
}

}  // namespace test_helpers
