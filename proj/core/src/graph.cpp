// Copyright 2026 The neariso Authors.
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

#include "neariso/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "neariso/error.hpp"

namespace neariso {

void WeightedDigraph::add_edge(std::size_t from, std::size_t to,
                               double weight) {
  if (from >= n_ || to >= n_) {
    throw InvalidArgument("edge (" + std::to_string(from) + ", " +
                          std::to_string(to) + ") is out of range for " +
                          std::to_string(n_) + " nodes");
  }
  if (from == to) {
    throw InvalidArgument("self-loop at node " + std::to_string(from));
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw InvalidWeights("edge weight must be positive and finite");
  }
  const std::uint64_t key = (static_cast<std::uint64_t>(from) << 32) ^
                            static_cast<std::uint64_t>(to);
  auto [it, inserted] = index_.try_emplace(key, edges_.size());
  if (inserted) {
    edges_.push_back({from, to, weight});
  } else {
    edges_[it->second].weight += weight;
  }
}

double WeightedDigraph::total_weight() const {
  double total = 0.0;
  for (const Edge& e : edges_) total += e.weight;
  return total;
}

WeightedDigraph build_chain(std::size_t n, std::span<const double> weights) {
  if (!weights.empty() && weights.size() + 1 != n) {
    throw InvalidWeights("chain of " + std::to_string(n) + " nodes needs " +
                         std::to_string(n == 0 ? 0 : n - 1) + " weights");
  }
  WeightedDigraph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.add_edge(i, i + 1, weights.empty() ? 1.0 : weights[i]);
  }
  return g;
}

WeightedDigraph build_symmetric_chain(std::size_t n) {
  WeightedDigraph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.add_edge(i, i + 1);
    g.add_edge(i + 1, i);
  }
  return g;
}

WeightedDigraph build_grid2d(std::size_t rows, std::size_t cols) {
  WeightedDigraph g(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t v = r * cols + c;
      if (c + 1 < cols) g.add_edge(v, v + 1);
      if (r + 1 < rows) g.add_edge(v, v + cols);
    }
  }
  return g;
}

double penalty(const WeightedDigraph& graph, std::span<const double> theta) {
  if (theta.size() != graph.num_nodes()) {
    throw InvalidArgument("theta length does not match the graph");
  }
  double total = 0.0;
  for (const Edge& e : graph.edges()) {
    total += e.weight * std::max(theta[e.from] - theta[e.to], 0.0);
  }
  return total;
}

std::size_t constant_components(const WeightedDigraph& graph,
                                std::span<const double> theta,
                                double group_tol) {
  const std::size_t n = graph.num_nodes();
  if (theta.size() != n) {
    throw InvalidArgument("theta length does not match the graph");
  }
  if (n == 0) return 0;
  const auto [lo, hi] = std::minmax_element(theta.begin(), theta.end());
  const double range = *hi - *lo;
  const double tol = group_tol * (range > 0.0 ? range : 1.0);

  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::size_t components = n;
  for (const Edge& e : graph.edges()) {
    if (std::abs(theta[e.from] - theta[e.to]) > tol) continue;
    const std::size_t a = find(e.from), b = find(e.to);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

WeightedDigraph read_edge_list(std::istream& in, std::size_t min_nodes) {
  std::vector<Edge> edges;
  std::size_t n = min_nodes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    long long i = 0, j = 0;
    if (!(fields >> i)) continue;
    double w = 1.0;
    if (!(fields >> j >> w) || i < 1 || j < 1) {
      throw InvalidArgument("edge list line " + std::to_string(lineno) +
                            ": expected `i j weight` with 1-based indices");
    }
    std::string extra;
    if (fields >> extra) {
      throw InvalidArgument("edge list line " + std::to_string(lineno) +
                            ": trailing text");
    }
    edges.push_back({static_cast<std::size_t>(i - 1),
                     static_cast<std::size_t>(j - 1), w});
    n = std::max({n, static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
  }
  WeightedDigraph g(n);
  for (const Edge& e : edges) g.add_edge(e.from, e.to, e.weight);
  return g;
}

void write_edge_list(std::ostream& out, const WeightedDigraph& graph) {
  const auto old = out.precision(17);
  for (const Edge& e : graph.edges()) {
    out << e.from + 1 << ' ' << e.to + 1 << ' ' << e.weight << '\n';
  }
  out.precision(old);
}

}  // namespace neariso
