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

#include "greenlan/partition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "greenlan/error.hpp"

namespace greenlan {
namespace {

using Group = std::vector<std::size_t>;

class RecursiveBisection {
 public:
  RecursiveBisection(const SymmetricGraph& g, std::size_t n_ports)
      : g_(g), n_ports_(n_ports) {}

  // `vertices` is in serialization order; the result keeps that order inside
  // each leaf.
  std::vector<Group> run(Group vertices, std::size_t d) {
    std::vector<Group> out;
    if (vertices.empty()) return out;
    if (vertices.size() <= n_ports_) {
      out.push_back(std::move(vertices));
      return out;
    }

    Group local = vertices;
    std::sort(local.begin(), local.end());
    const SymmetricGraph sub = g_.induced(local);
    if (sub.edgeless()) return chunk(local);

    auto outcome = fiedler(laplacian(sub));
    if (auto* split = std::get_if<DisconnectedGraph>(&outcome)) {
      disconnected_ = true;
      std::vector<Group> components;
      for (const auto& c : split->components) {
        Group global;
        for (std::size_t k : c) global.push_back(local[k]);
        components.push_back(std::move(global));
      }
      return pack(std::move(components), d);
    }

    const auto& f = std::get<FiedlerResult>(outcome);
    Group ordered;
    ordered.reserve(local.size());
    for (std::size_t k : f.ordering) ordered.push_back(local[k]);

    const std::size_t half = d / 2;
    const std::size_t cut = std::min(ordered.size(), n_ports_ * half);
    Group first(ordered.begin(), ordered.begin() + cut);
    Group rest(ordered.begin() + cut, ordered.end());
    out = run(std::move(first), half);
    auto tail = run(std::move(rest), d - half);
    out.insert(out.end(), std::make_move_iterator(tail.begin()),
               std::make_move_iterator(tail.end()));
    return out;
  }

  bool disconnected() const { return disconnected_; }

 private:
  std::vector<Group> chunk(const Group& vertices) const {
    std::vector<Group> out;
    for (std::size_t i = 0; i < vertices.size(); i += n_ports_) {
      const std::size_t end = std::min(vertices.size(), i + n_ports_);
      out.emplace_back(vertices.begin() + i, vertices.begin() + end);
    }
    return out;
  }

  // Components that exceed one switch are bisected on their own budget;
  // the rest are packed first-fit decreasing. If the packing needs more than
  // d groups, components are split at their cheapest Fiedler prefix until
  // they fit.
  std::vector<Group> pack(std::vector<Group> components, std::size_t d) {
    std::vector<Group> fixed;
    std::vector<Group> pieces;
    for (auto& c : components) {
      if (c.size() > n_ports_) {
        const std::size_t need = (c.size() + n_ports_ - 1) / n_ports_;
        auto groups = run(c, need);
        fixed.insert(fixed.end(), groups.begin(), groups.end());
      } else {
        pieces.push_back(std::move(c));
      }
    }

    while (true) {
      auto bins = first_fit(fixed, pieces);
      if (bins.size() <= d) return bins;

      // Prefer the cheapest single split that makes the packing fit;
      // otherwise take the cheapest split and try again.
      std::size_t best = pieces.size();
      std::size_t cheapest = pieces.size();
      double best_cost = std::numeric_limits<double>::infinity();
      double cheapest_cost = best_cost;
      std::vector<Group> best_pieces;
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        if (pieces[k].size() < 2) continue;
        auto [cost, head, tail] = cheapest_prefix(pieces[k]);
        if (cost < cheapest_cost) cheapest_cost = cost, cheapest = k;
        if (cost >= best_cost) continue;
        auto trial = pieces;
        trial[k] = std::move(head);
        trial.push_back(std::move(tail));
        if (first_fit(fixed, trial).size() <= d) {
          best_cost = cost;
          best = k;
          best_pieces = std::move(trial);
        }
      }
      if (best < pieces.size()) return first_fit(fixed, best_pieces);
      if (cheapest == pieces.size()) return chunk(concat(fixed, pieces));
      auto [cost, head, tail] = cheapest_prefix(pieces[cheapest]);
      pieces[cheapest] = std::move(head);
      pieces.push_back(std::move(tail));
    }
  }

  std::vector<Group> first_fit(const std::vector<Group>& fixed,
                               std::vector<Group> pieces) const {
    std::stable_sort(pieces.begin(), pieces.end(),
                     [](const Group& a, const Group& b) {
                       return a.size() > b.size();
                     });
    std::vector<Group> bins = fixed;
    for (const auto& c : pieces) {
      auto fit = std::find_if(bins.begin(), bins.end(), [&](const Group& b) {
        return b.size() + c.size() <= n_ports_;
      });
      if (fit == bins.end()) {
        bins.push_back(c);
      } else {
        fit->insert(fit->end(), c.begin(), c.end());
      }
    }
    return bins;
  }

  static Group concat(const std::vector<Group>& a, const std::vector<Group>& b) {
    Group flat;
    for (const auto* list : {&a, &b})
      for (const auto& c : *list) flat.insert(flat.end(), c.begin(), c.end());
    return flat;
  }

  // Lightest cut between a prefix and the rest of the piece's Fiedler order.
  std::tuple<double, Group, Group> cheapest_prefix(const Group& piece) const {
    Group local = piece;
    std::sort(local.begin(), local.end());
    const SymmetricGraph sub = g_.induced(local);
    const std::size_t n = local.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto outcome = fiedler(laplacian(sub));
    if (const auto* f = std::get_if<FiedlerResult>(&outcome)) order = f->ordering;

    std::vector<bool> in_head(n, false);
    double crossing = 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 1;
    for (std::size_t k = 1; k < n; ++k) {
      const std::size_t moved = order[k - 1];
      for (std::size_t v = 0; v < n; ++v) {
        if (v != moved) crossing += in_head[v] ? -sub.weight(moved, v) : sub.weight(moved, v);
      }
      in_head[moved] = true;
      if (crossing < best) best = crossing, best_k = k;
    }
    Group head, tail;
    for (std::size_t k = 0; k < n; ++k)
      (k < best_k ? head : tail).push_back(local[order[k]]);
    return {best, std::move(head), std::move(tail)};
  }

  const SymmetricGraph& g_;
  std::size_t n_ports_;
  bool disconnected_ = false;
};

struct BruteForceSearch {
  const SymmetricGraph& g;
  std::size_t n_ports;
  std::size_t d;
  double eps;
  std::vector<std::size_t> labels;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> best_labels;
  double best = std::numeric_limits<double>::infinity();

  void search(std::size_t vertex, std::size_t used, double partial) {
    const std::size_t n = g.size();
    if (vertex == n) {
      if (partial < best - eps) {
        best = partial;
        best_labels = labels;
      }
      return;
    }
    const std::size_t limit = std::min(used + 1, d);
    for (std::size_t label = 0; label < limit; ++label) {
      if (counts[label] == n_ports) continue;
      double added = 0.0;
      for (std::size_t j = 0; j < vertex; ++j)
        if (labels[j] != label) added += g.weight(vertex, j);
      const double next = partial + added;
      if (next >= best - eps) continue;
      labels[vertex] = label;
      ++counts[label];
      search(vertex + 1, std::max(used, label + 1), next);
      --counts[label];
    }
  }
};

}  // namespace

Partition Partition::create(std::size_t n,
                            std::vector<std::vector<std::size_t>> groups,
                            std::size_t capacity) {
  Partition p;
  p.n_ = n;
  p.capacity_ = capacity;
  p.group_of_.assign(n, std::numeric_limits<std::size_t>::max());
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    if (groups[gi].size() > capacity) {
      fail_invalid(fmt::format("group {} has {} devices, capacity is {}",
                               gi + 1, groups[gi].size(), capacity));
    }
    for (std::size_t v : groups[gi]) {
      if (v >= n) {
        fail_invalid(fmt::format("device {} out of range 1..{}", v + 1, n));
      }
      if (p.group_of_[v] != std::numeric_limits<std::size_t>::max()) {
        fail_invalid(fmt::format("device {} appears in more than one group",
                                 v + 1));
      }
      p.group_of_[v] = gi;
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (p.group_of_[v] == std::numeric_limits<std::size_t>::max()) {
      fail_invalid(fmt::format("device {} is not assigned to any group", v + 1));
    }
  }
  p.groups_ = std::move(groups);
  return p;
}

Partition Partition::blocks(std::size_t n, std::size_t capacity) {
  if (capacity == 0) fail_invalid("group capacity must be at least 1");
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t v = 0; v < n; ++v) {
    if (v % capacity == 0) groups.emplace_back();
    groups.back().push_back(v);
  }
  return create(n, std::move(groups), capacity);
}

std::vector<std::size_t> Partition::serialization() const {
  std::vector<std::size_t> out;
  out.reserve(n_);
  for (const auto& g : groups_) out.insert(out.end(), g.begin(), g.end());
  return out;
}

CutReport cut_size(const SymmetricGraph& g, const Partition& p) {
  if (g.size() != p.size()) {
    fail_invalid(fmt::format("partition covers {} devices, graph has {}",
                             p.size(), g.size()));
  }
  CutReport report;
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t a = p.group_of(i);
      const std::size_t b = p.group_of(j);
      const double w = g.weight(i, j);
      if (a == b || w == 0.0) continue;
      report.pair_flows[{std::min(a, b), std::max(a, b)}] += w;
      report.cut_size += w;
    }
  }
  if (p.group_count() == 2) {
    const std::size_t smaller =
        std::min(p.groups()[0].size(), p.groups()[1].size());
    if (smaller > 0) report.ratio = report.cut_size / smaller;
  }
  return report;
}

FiedlerSplit split(const FiedlerResult& f, SplitStrategy strategy,
                   const SymmetricGraph& g) {
  const std::size_t n = f.vector.size();
  if (n < 2 || f.ordering.size() != n || g.size() != n) {
    fail_invalid("split: needs a Fiedler result over the graph's vertices");
  }
  std::vector<double> sorted(n);
  for (std::size_t k = 0; k < n; ++k) sorted[k] = f.vector[f.ordering[k]];

  double s = 0.0;
  switch (strategy) {
    case SplitStrategy::kBisection:
      s = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
      break;
    case SplitStrategy::kSign:
      s = 0.0;
      break;
    case SplitStrategy::kRatio: {
      double best = std::numeric_limits<double>::infinity();
      s = sorted.back();  // empties V1 unless some prefix qualifies
      std::vector<bool> in_lower(n, false);
      double crossing = 0.0;
      for (std::size_t k = 1; k < n; ++k) {
        const std::size_t moved = f.ordering[k - 1];
        for (std::size_t v = 0; v < n; ++v) {
          if (v == moved) continue;
          crossing += in_lower[v] ? -g.weight(moved, v) : g.weight(moved, v);
        }
        in_lower[moved] = true;
        if (!(sorted[k - 1] < sorted[k])) continue;
        const double phi = crossing / static_cast<double>(std::min(k, n - k));
        if (phi < best) {
          best = phi;
          s = 0.5 * (sorted[k - 1] + sorted[k]);
        }
      }
      break;
    }
    case SplitStrategy::kGap: {
      double widest = 0.0;
      s = sorted.back();
      for (std::size_t k = 1; k < n; ++k) {
        const double gap = sorted[k] - sorted[k - 1];
        if (gap > widest) {
          widest = gap;
          s = 0.5 * (sorted[k - 1] + sorted[k]);
        }
      }
      break;
    }
  }

  FiedlerSplit out;
  out.threshold = s;
  for (std::size_t v = 0; v < n; ++v)
    (f.vector[v] > s ? out.upper : out.lower).push_back(v);
  if (out.upper.empty() || out.lower.empty()) {
    out = {};
    out.fell_back = true;
    const std::size_t lower_size = (n + 1) / 2;
    for (std::size_t k = 0; k < n; ++k)
      (k < lower_size ? out.lower : out.upper).push_back(f.ordering[k]);
    std::sort(out.lower.begin(), out.lower.end());
    std::sort(out.upper.begin(), out.upper.end());
    out.threshold = 0.5 * (sorted[lower_size - 1] + sorted[lower_size]);
  }
  return out;
}

Partition rsb_optimized(const SymmetricGraph& g, std::size_t n_ports,
                        std::size_t d_switches) {
  if (n_ports == 0 || d_switches == 0) {
    fail_invalid("device ports per switch and switch count must be >= 1");
  }
  const std::size_t n = g.size();
  if (n > n_ports * d_switches) {
    throw Error(ErrorKind::kInfeasible,
                fmt::format("{} devices exceed capacity {} x {} = {}", n,
                            d_switches, n_ports, n_ports * d_switches));
  }
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  RecursiveBisection rsb(g, n_ports);
  auto groups = rsb.run(std::move(all), d_switches);
  Partition p = Partition::create(n, std::move(groups), n_ports);
  p.set_disconnected_input(rsb.disconnected());
  return p;
}

Partition brute_force_min_cut(const SymmetricGraph& g, std::size_t n_ports,
                              std::size_t d_switches) {
  const std::size_t n = g.size();
  if (n > kBruteForceMaxVertices) {
    fail_invalid(fmt::format("brute force limited to {} vertices, got {}",
                             kBruteForceMaxVertices, n));
  }
  if (n_ports == 0 || d_switches == 0) {
    fail_invalid("device ports per switch and switch count must be >= 1");
  }
  if (n > n_ports * d_switches) {
    throw Error(ErrorKind::kInfeasible,
                fmt::format("{} devices exceed capacity {} x {}", n, d_switches,
                            n_ports));
  }
  double total = 0.0;
  for (double w : g.adjacency().values()) total += w;
  BruteForceSearch search{g, n_ports, d_switches, 1e-12 * (total + 1.0),
                          std::vector<std::size_t>(n, 0),
                          std::vector<std::size_t>(d_switches, 0), {}};
  search.search(0, 0, 0.0);

  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t v = 0; v < n; ++v) {
    if (search.best_labels[v] == groups.size()) groups.emplace_back();
    groups[search.best_labels[v]].push_back(v);
  }
  return Partition::create(n, std::move(groups), n_ports);
}

}  // namespace greenlan
