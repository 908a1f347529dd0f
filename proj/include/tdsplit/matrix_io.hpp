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
#ifndef TDSPLIT_MATRIX_IO_HPP
#define TDSPLIT_MATRIX_IO_HPP

#include <filesystem>
#include <string>

#include "tdsplit/model.hpp"

namespace tdsplit {

/// Reads a Matrix Market "coordinate real|integer general" file. Duplicate
/// entries are summed.
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// Writes with 17 significant digits, so reading back is exact.
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& M);

/// One value per line; blank lines and lines starting with '%' or '#' skipped.
Vector read_dense_vector(const std::filesystem::path& path);
void write_dense_vector(const std::filesystem::path& path, const Vector& v);

/// CSV with time in the first column and one column per output component.
/// A header row is detected by a non-numeric first token.
ReferenceSignal read_reference_csv(const std::filesystem::path& path);
void write_reference_csv(const std::filesystem::path& path, const ReferenceSignal& signal);

/// Builds a validated model from files. `x0_spec` is a vector file path or
/// "ones"/"zeros"; `y_ref_spec` is "zero" or a CSV path.
LtiModel load_generic_model(const std::filesystem::path& path_A,
                            const std::filesystem::path& path_B,
                            const std::filesystem::path& path_C,
                            const std::string& x0_spec, double alpha,
                            const std::string& y_ref_spec);

/// Writes A.mtx, B.mtx, C.mtx, x0.txt (and y_ref.csv for tabular signals).
void export_model(const LtiModel& model, const std::filesystem::path& directory);

}  // namespace tdsplit

#endif  // TDSPLIT_MATRIX_IO_HPP
