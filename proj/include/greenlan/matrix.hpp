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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace greenlan {

/// Dense row-major n x n matrix of doubles.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {}

  /// Builds from nested rows; throws Error if the rows are not square.
  static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static SquareMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }
  std::span<const double> values() const { return data_; }

  double frobenius_norm() const;
  SquareMatrix transposed() const;
  /// Rows and columns restricted to `indices`, in the given order.
  SquareMatrix submatrix(std::span<const std::size_t> indices) const;
  std::vector<double> multiply(std::span<const double> x) const;

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b);
SquareMatrix operator*(double s, const SquareMatrix& m);

}  // namespace greenlan
