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
#include "tdsplit/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace tdsplit {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& path) {
  if (!fs::exists(path)) throw ModelError("file not found: " + path.string());
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_double(std::string_view token, double& out) {
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

SparseMatrix read_matrix_market(const fs::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ModelError(path.string() + ": empty file");
  std::istringstream banner(lower(line));
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix")
    throw ModelError(path.string() + ": missing MatrixMarket banner");
  if (format != "coordinate")
    throw ModelError(path.string() + ": only coordinate format is supported");
  if (field != "real" && field != "integer" && field != "double")
    throw ModelError(path.string() + ": unsupported field '" + field + "'");
  if (symmetry != "general")
    throw ModelError(path.string() + ": unsupported symmetry '" + symmetry + "'");

  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  std::istringstream size_line(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(size_line >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
    throw ModelError(path.string() + ": malformed size line");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nnz));
  for (long k = 0; k < nnz; ++k) {
    if (!std::getline(in, line)) throw ModelError(path.string() + ": truncated entry list");
    if (line.empty() || line[0] == '%') {
      --k;
      continue;
    }
    std::istringstream entry(line);
    long i = 0, j = 0;
    std::string value;
    double v = 0.0;
    if (!(entry >> i >> j >> value) || !parse_double(value, v))
      throw ModelError(path.string() + ": malformed entry '" + line + "'");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw ModelError(path.string() + ": entry (" + std::to_string(i) + "," + std::to_string(j) +
                       ") out of range");
    triplets.emplace_back(i - 1, j - 1, v);
  }
  SparseMatrix M(rows, cols);
  M.setFromTriplets(triplets.begin(), triplets.end());
  M.makeCompressed();
  return M;
}

void write_matrix_market(const fs::path& path, const SparseMatrix& M) {
  auto out = open_output(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
  for (Index k = 0; k < M.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(M, k); it; ++it)
      out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

Vector read_dense_vector(const fs::path& path) {
  auto in = open_input(path);
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%' || line[first] == '#') continue;
    double v = 0.0;
    if (!parse_double(line, v))
      throw ModelError(path.string() + ":" + std::to_string(lineno) + ": not a number");
    values.push_back(v);
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

void write_dense_vector(const fs::path& path, const Vector& v) {
  auto out = open_output(path);
  for (Index i = 0; i < v.size(); ++i) out << v[i] << "\n";
}

ReferenceSignal read_reference_csv(const fs::path& path) {
  auto in = open_input(path);
  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first_line = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv(line);
    double t = 0.0;
    if (first_line && !parse_double(fields.front(), t)) {
      first_line = false;
      continue;  // header
    }
    first_line = false;
    if (fields.size() < 2)
      throw ModelError(path.string() + ":" + std::to_string(lineno) + ": need time and values");
    std::vector<double> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v))
        throw ModelError(path.string() + ":" + std::to_string(lineno) + ": not a number");
      if (c == 0) times.push_back(v);
      else row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ModelError(path.string() + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ModelError(path.string() + ": no samples");
  ReferenceSignal sig;
  sig.times = std::move(times);
  sig.values.resize(static_cast<Index>(rows.front().size()), static_cast<Index>(rows.size()));
  for (std::size_t s = 0; s < rows.size(); ++s)
    for (std::size_t c = 0; c < rows[s].size(); ++c)
      sig.values(static_cast<Index>(c), static_cast<Index>(s)) = rows[s][c];
  for (std::size_t i = 1; i < sig.times.size(); ++i)
    if (!(sig.times[i] > sig.times[i - 1]))
      throw ModelError(path.string() + ": times must be strictly increasing");
  return sig;
}

void write_reference_csv(const fs::path& path, const ReferenceSignal& signal) {
  auto out = open_output(path);
  out << "t";
  for (Index c = 0; c < signal.values.rows(); ++c) out << ",y" << c;
  out << "\n";
  for (std::size_t s = 0; s < signal.times.size(); ++s) {
    out << signal.times[s];
    for (Index c = 0; c < signal.values.rows(); ++c)
      out << "," << signal.values(c, static_cast<Index>(s));
    out << "\n";
  }
}

LtiModel load_generic_model(const fs::path& path_A, const fs::path& path_B,
                            const fs::path& path_C, const std::string& x0_spec,
                            double alpha, const std::string& y_ref_spec) {
  if (!(alpha > 0.0)) throw ModelError("alpha must be positive, got " + std::to_string(alpha));
  SparseMatrix A = read_matrix_market(path_A);
  SparseMatrix B = read_matrix_market(path_B);
  SparseMatrix C = read_matrix_market(path_C);
  Vector x0;
  if (x0_spec == "ones") x0 = Vector::Ones(A.rows());
  else if (x0_spec == "zeros" || x0_spec == "zero") x0 = Vector::Zero(A.rows());
  else x0 = read_dense_vector(x0_spec);
  ReferenceSignal y_ref;
  if (y_ref_spec != "zero" && !y_ref_spec.empty()) y_ref = read_reference_csv(y_ref_spec);
  return make_model(std::move(A), std::move(B), std::move(C), alpha, std::move(x0),
                    std::move(y_ref));
}

void export_model(const LtiModel& model, const fs::path& directory) {
  fs::create_directories(directory);
  write_matrix_market(directory / "A.mtx", model.A);
  write_matrix_market(directory / "B.mtx", model.B);
  write_matrix_market(directory / "C.mtx", model.C);
  write_dense_vector(directory / "x0.txt", model.x0);
  if (!model.y_ref.is_zero()) write_reference_csv(directory / "y_ref.csv", model.y_ref);
}

}  // namespace tdsplit
