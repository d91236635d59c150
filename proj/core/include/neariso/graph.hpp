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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

namespace neariso {

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
};

/// Directed graph on nodes 0..n-1 with positive edge weights. Parallel edges
/// are merged on insertion (weights add); self-loops are rejected.
class WeightedDigraph {
 public:
  WeightedDigraph() = default;
  explicit WeightedDigraph(std::size_t num_nodes) : n_(num_nodes) {}

  void add_edge(std::size_t from, std::size_t to, double weight = 1.0);

  std::size_t num_nodes() const { return n_; }
  std::span<const Edge> edges() const { return edges_; }
  double total_weight() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Edges (i, i+1); unit weights when `weights` is empty.
WeightedDigraph build_chain(std::size_t n, std::span<const double> weights = {});

/// Edges (i, i+1) and (i+1, i) with unit weights: the penalty is the total
/// variation, so the prox is the 1-D fused lasso.
WeightedDigraph build_symmetric_chain(std::size_t n);

/// Row-major grid, node r * cols + c, with rightward and downward edges.
WeightedDigraph build_grid2d(std::size_t rows, std::size_t cols);

/// sum over edges of c_(i,j) (theta_i - theta_j)_+.
double penalty(const WeightedDigraph& graph, std::span<const double> theta);

/// Connected components of the graph after dropping edges whose endpoint
/// values differ by more than group_tol * range(theta). Used as the df of a
/// graph fit.
std::size_t constant_components(const WeightedDigraph& graph,
                                std::span<const double> theta,
                                double group_tol = 1e-9);

/// Reads the `i j weight` text format (1-based, one edge per line, `#`
/// comments and blank lines ignored). The node count is the larger of
/// `min_nodes` and the largest index seen.
WeightedDigraph read_edge_list(std::istream& in, std::size_t min_nodes = 0);
void write_edge_list(std::ostream& out, const WeightedDigraph& graph);

}  // namespace neariso
