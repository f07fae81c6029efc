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
#include <variant>
#include <vector>

#include "greenlan/matrix.hpp"
#include "greenlan/traffic.hpp"

namespace greenlan {

/// Undirected weighted graph stored as a symmetric adjacency matrix with an
/// empty diagonal.
class SymmetricGraph {
 public:
  /// Validates symmetry, nonnegativity and the zero diagonal.
  static SymmetricGraph create(SquareMatrix adjacency);

  std::size_t size() const { return adj_.size(); }
  double weight(std::size_t i, std::size_t j) const { return adj_(i, j); }
  const SquareMatrix& adjacency() const { return adj_; }

  bool edgeless() const;
  /// Induced subgraph on `vertices`; local vertex k is vertices[k].
  SymmetricGraph induced(std::span<const std::size_t> vertices) const;
  /// Connected components over positive-weight edges, each sorted ascending,
  /// ordered by their smallest vertex.
  std::vector<std::vector<std::size_t>> components() const;

 private:
  explicit SymmetricGraph(SquareMatrix adj) : adj_(std::move(adj)) {}
  SquareMatrix adj_;
};

/// adj = directed + directed^t
SymmetricGraph symmetrize(const TrafficMatrix& directed);

struct LaplacianMatrix {
  SquareMatrix entries;
  std::vector<double> degrees;
};

/// L = D - A with D the diagonal of weighted degrees.
LaplacianMatrix laplacian(const SymmetricGraph& g);

struct JacobiOptions {
  /// Stop when the off-diagonal Frobenius norm drops below this times |M|_F.
  double relative_tolerance = 1e-12;
  int max_sweeps = 100;
};

struct EigenDecomposition {
  /// Ascending.
  std::vector<double> values;
  /// vectors[k] is the unit eigenvector for values[k].
  std::vector<std::vector<double>> vectors;
};

/// Full spectrum of a dense symmetric matrix by cyclic Jacobi rotations.
/// Throws Error(kNumerical) with the remaining off-diagonal norm if the sweep
/// budget runs out.
EigenDecomposition eig_symmetric(const SquareMatrix& m,
                                 const JacobiOptions& options = {});

struct FiedlerResult {
  double lambda2 = 0.0;
  /// Unit norm; the first component with |u_i| > 1e-9 is positive.
  std::vector<double> vector;
  /// Vertices by ascending component, ties by ascending index.
  std::vector<std::size_t> ordering;
  /// lambda2 is (numerically) a repeated eigenvalue; the vector is one
  /// member of its eigenspace.
  bool degenerate = false;
};

/// Returned instead of a Fiedler ordering when the graph has more than one
/// connected component.
struct DisconnectedGraph {
  double lambda2 = 0.0;
  std::vector<std::vector<std::size_t>> components;
};

using FiedlerOutcome = std::variant<FiedlerResult, DisconnectedGraph>;

inline constexpr double kConnectivityTolerance = 1e-9;
inline constexpr double kSignTolerance = 1e-9;

FiedlerOutcome fiedler(const LaplacianMatrix& l);

/// Vertices of `vector` sorted by value, ties by index.
std::vector<std::size_t> sorted_ordering(std::span<const double> vector);

}  // namespace greenlan
