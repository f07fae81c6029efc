// Copyright 2026 The greenlan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "greenlan/matrix.hpp"

#include <cmath>

#include <fmt/format.h>

#include "greenlan/error.hpp"

namespace greenlan {

SquareMatrix SquareMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  SquareMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      fail_invalid(fmt::format("matrix is not square: row {} has {} entries, "
                               "expected {}",
                               i + 1, rows[i].size(), rows.size()));
    }
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double SquareMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (double v : data_) sum += v * v;
  return std::sqrt(sum);
}

SquareMatrix SquareMatrix::transposed() const {
  SquareMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

SquareMatrix SquareMatrix::submatrix(
    std::span<const std::size_t> indices) const {
  SquareMatrix sub(indices.size());
  for (std::size_t a = 0; a < indices.size(); ++a)
    for (std::size_t b = 0; b < indices.size(); ++b)
      sub(a, b) = (*this)(indices[a], indices[b]);
  return sub;
}

std::vector<double> SquareMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
  SquareMatrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

SquareMatrix operator*(double s, const SquareMatrix& m) {
  SquareMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = s * m(i, j);
  return out;
}

}  // namespace greenlan
