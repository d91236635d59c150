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
#include <span>
#include <vector>

namespace neariso {

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  double capacity = 0.0;
};

/// s-t network with nonnegative finite capacities. `offset` models a direct
/// source-to-sink arc: it is added to every cut and to the flow value.
class FlowNetwork {
 public:
  FlowNetwork(std::size_t num_nodes, std::size_t source, std::size_t sink);

  void add_arc(std::size_t from, std::size_t to, double capacity);
  void set_offset(double offset) { offset_ = offset; }

  std::size_t num_nodes() const { return n_; }
  std::size_t source() const { return source_; }
  std::size_t sink() const { return sink_; }
  double offset() const { return offset_; }
  std::span<const Arc> arcs() const { return arcs_; }

 private:
  std::size_t n_;
  std::size_t source_;
  std::size_t sink_;
  double offset_ = 0.0;
  std::vector<Arc> arcs_;
};

struct MinCut {
  double flow_value = 0.0;
  // Minimal source side: nodes reachable from the source in the residual
  // graph of a maximum flow.
  std::vector<bool> source_side;
};

/// Highest-label push-relabel with gap relabeling and global relabels.
/// Buffers are reused across solve() calls.
class PushRelabel {
 public:
  MinCut solve(const FlowNetwork& network);

 private:
  void build(const FlowNetwork& network);
  void global_relabel();
  void push(std::size_t arc);
  void relabel(std::size_t u);
  void gap(std::size_t label);
  void activate(std::size_t u);
  void bucket_insert(std::size_t u);
  void bucket_remove(std::size_t u);

  std::size_t n_ = 0, source_ = 0, sink_ = 0;
  // Residual graph in CSR layout; arc a and mate_[a] are reverses.
  std::vector<std::size_t> first_, head_, mate_, current_;
  std::vector<double> residual_, excess_;
  std::vector<std::size_t> label_, count_;
  // Per-label doubly linked lists of all labelled nodes, used by gap().
  std::vector<std::size_t> all_head_, next_, prev_;
  std::vector<std::vector<std::size_t>> active_;
  std::vector<bool> is_active_;
  std::size_t highest_ = 0;
  std::size_t relabels_since_global_ = 0;
};

MinCut max_flow_min_cut(const FlowNetwork& network);

/// Capacity of the cut (S, complement) where `source_side` marks S; the
/// source must be in S and the sink outside it. Includes the offset.
double cut_capacity(const FlowNetwork& network,
                    const std::vector<bool>& source_side);

}  // namespace neariso
