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

#include "greenlan/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "greenlan/error.hpp"

namespace greenlan {
namespace {

double off_diagonal_norm(const SquareMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

// Applies the rotation that annihilates a(p, q) to both a and the
// accumulated eigenvector matrix v (columns are eigenvectors).
void rotate(SquareMatrix& a, SquareMatrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = std::copysign(1.0, theta) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.size();

  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

SymmetricGraph SymmetricGraph::create(SquareMatrix adjacency) {
  const std::size_t n = adjacency.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0.0) {
      fail_invalid(fmt::format("nonzero diagonal at ({},{})", i + 1, i + 1));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double w = adjacency(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        fail_invalid(fmt::format("invalid edge weight at ({},{})", i + 1, j + 1));
      }
      if (w != adjacency(j, i)) {
        fail_invalid(fmt::format("adjacency not symmetric at ({},{})", i + 1,
                                 j + 1));
      }
    }
  }
  return SymmetricGraph(std::move(adjacency));
}

bool SymmetricGraph::edgeless() const {
  return std::all_of(adj_.values().begin(), adj_.values().end(),
                     [](double w) { return w == 0.0; });
}

SymmetricGraph SymmetricGraph::induced(
    std::span<const std::size_t> vertices) const {
  return SymmetricGraph(adj_.submatrix(vertices));
}

std::vector<std::vector<std::size_t>> SymmetricGraph::components() const {
  const std::size_t n = size();
  std::vector<int> label(n, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t root = 0; root < n; ++root) {
    if (label[root] >= 0) continue;
    const int id = static_cast<int>(out.size());
    std::vector<std::size_t> members{root};
    std::vector<std::size_t> stack{root};
    label[root] = id;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u = 0; u < n; ++u) {
        if (label[u] < 0 && adj_(v, u) > 0.0) {
          label[u] = id;
          members.push_back(u);
          stack.push_back(u);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

SymmetricGraph symmetrize(const TrafficMatrix& directed) {
  return SymmetricGraph::create(directed.weights() +
                                directed.weights().transposed());
}

LaplacianMatrix laplacian(const SymmetricGraph& g) {
  const std::size_t n = g.size();
  LaplacianMatrix l{SquareMatrix(n), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      degree += g.weight(i, j);
      if (i != j) l.entries(i, j) = -g.weight(i, j);
    }
    l.degrees[i] = degree;
    l.entries(i, i) = degree;
  }
  return l;
}

EigenDecomposition eig_symmetric(const SquareMatrix& m,
                                 const JacobiOptions& options) {
  const std::size_t n = m.size();
  SquareMatrix a = m;
  SquareMatrix v = SquareMatrix::identity(n);
  const double threshold = options.relative_tolerance * m.frobenius_norm();

  int sweep = 0;
  double off = off_diagonal_norm(a);
  while (off > threshold) {
    if (sweep == options.max_sweeps) {
      throw Error(ErrorKind::kNumerical,
                  fmt::format("jacobi did not converge after {} sweeps; "
                              "off-diagonal residual {:.3e}",
                              sweep, off));
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    ++sweep;
    off = off_diagonal_norm(a);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x) < a(y, y);
  });

  EigenDecomposition out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t k : order) {
    out.values.push_back(a(k, k));
    std::vector<double> vec(n);
    for (std::size_t i = 0; i < n; ++i) vec[i] = v(i, k);
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

std::vector<std::size_t> sorted_ordering(std::span<const double> vector) {
  std::vector<std::size_t> order(vector.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) {
                     return vector[x] < vector[y];
                   });
  return order;
}

FiedlerOutcome fiedler(const LaplacianMatrix& l) {
  const std::size_t n = l.entries.size();
  if (n < 2) {
    fail_invalid(fmt::format("fiedler vector needs at least 2 vertices, got {}",
                             n));
  }
  const double scale = l.entries.frobenius_norm();
  auto eig = eig_symmetric(l.entries);
  const double lambda2 = eig.values[1];

  if (lambda2 <= kConnectivityTolerance * scale) {
    // Rebuild the adjacency to read off components combinatorially.
    SquareMatrix adj(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) adj(i, j) = -l.entries(i, j);
    auto components = SymmetricGraph::create(std::move(adj)).components();
    if (components.size() > 1) {
      return DisconnectedGraph{lambda2, std::move(components)};
    }
  }

  FiedlerResult result;
  result.lambda2 = lambda2;
  result.vector = std::move(eig.vectors[1]);
  result.degenerate =
      n > 2 && std::abs(eig.values[2] - lambda2) <= kConnectivityTolerance * scale;
  // Near-disconnected graphs that are combinatorially connected land here.
  if (lambda2 <= kConnectivityTolerance * scale) result.degenerate = true;

  const auto lead = std::find_if(result.vector.begin(), result.vector.end(),
                                 [](double x) { return std::abs(x) > kSignTolerance; });
  if (lead != result.vector.end() && *lead < 0.0) {
    for (double& x : result.vector) x = -x;
  }
  result.ordering = sorted_ordering(result.vector);
  return result;
}

}  // namespace greenlan
