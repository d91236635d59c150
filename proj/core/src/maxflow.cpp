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

#include "neariso/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "neariso/error.hpp"

namespace neariso {

namespace {
constexpr std::size_t kNil = static_cast<std::size_t>(-1);
}  // namespace

FlowNetwork::FlowNetwork(std::size_t num_nodes, std::size_t source,
                         std::size_t sink)
    : n_(num_nodes), source_(source), sink_(sink) {
  if (source >= num_nodes || sink >= num_nodes || source == sink) {
    throw InvalidArgument("flow network needs distinct source and sink nodes");
  }
}

void FlowNetwork::add_arc(std::size_t from, std::size_t to, double capacity) {
  if (from >= n_ || to >= n_) throw InvalidArgument("arc endpoint out of range");
  if (!(capacity >= 0.0) || !std::isfinite(capacity)) {
    throw InvalidArgument("arc capacity must be finite and nonnegative");
  }
  if (capacity > 0.0 && from != to) arcs_.push_back({from, to, capacity});
}

void PushRelabel::build(const FlowNetwork& network) {
  n_ = network.num_nodes();
  source_ = network.source();
  sink_ = network.sink();
  const auto arcs = network.arcs();

  first_.assign(n_ + 1, 0);
  for (const Arc& a : arcs) {
    ++first_[a.from + 1];
    ++first_[a.to + 1];
  }
  for (std::size_t v = 0; v < n_; ++v) first_[v + 1] += first_[v];
  const std::size_t m = first_[n_];
  head_.resize(m);
  mate_.resize(m);
  residual_.resize(m);
  current_.assign(first_.begin(), first_.end() - 1);
  for (const Arc& a : arcs) {
    const std::size_t f = current_[a.from]++;
    const std::size_t r = current_[a.to]++;
    head_[f] = a.to;
    head_[r] = a.from;
    mate_[f] = r;
    mate_[r] = f;
    residual_[f] = a.capacity;
    residual_[r] = 0.0;
  }
  current_.assign(first_.begin(), first_.end() - 1);

  excess_.assign(n_, 0.0);
  label_.assign(n_, 0);
  count_.assign(n_ + 1, 0);
  all_head_.assign(n_ + 1, kNil);
  next_.assign(n_, kNil);
  prev_.assign(n_, kNil);
  active_.resize(2 * n_ + 1);
  for (auto& bucket : active_) bucket.clear();
  is_active_.assign(n_, false);
  highest_ = 0;
  relabels_since_global_ = 0;
}

void PushRelabel::bucket_insert(std::size_t u) {
  const std::size_t l = label_[u];
  if (l >= n_) return;
  prev_[u] = kNil;
  next_[u] = all_head_[l];
  if (all_head_[l] != kNil) prev_[all_head_[l]] = u;
  all_head_[l] = u;
  ++count_[l];
}

void PushRelabel::bucket_remove(std::size_t u) {
  const std::size_t l = label_[u];
  if (l >= n_) return;
  if (prev_[u] != kNil) {
    next_[prev_[u]] = next_[u];
  } else {
    all_head_[l] = next_[u];
  }
  if (next_[u] != kNil) prev_[next_[u]] = prev_[u];
  --count_[l];
}

void PushRelabel::activate(std::size_t u) {
  if (u == source_ || u == sink_ || is_active_[u] || excess_[u] <= 0.0) return;
  if (label_[u] >= 2 * n_) return;
  is_active_[u] = true;
  active_[label_[u]].push_back(u);
  highest_ = std::max(highest_, label_[u]);
}

// Exact distance labels: to the sink where it is reachable in the residual
// graph, otherwise n + distance to the source.
void PushRelabel::global_relabel() {
  relabels_since_global_ = 0;
  const std::size_t unreached = 2 * n_;
  std::fill(label_.begin(), label_.end(), unreached);
  std::fill(all_head_.begin(), all_head_.end(), kNil);
  std::fill(count_.begin(), count_.end(), 0);
  for (auto& bucket : active_) bucket.clear();
  std::fill(is_active_.begin(), is_active_.end(), false);
  highest_ = 0;

  std::deque<std::size_t> queue;
  auto bfs = [&](std::size_t root, std::size_t base) {
    label_[root] = base;
    queue.push_back(root);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t a = first_[v]; a < first_[v + 1]; ++a) {
        const std::size_t u = head_[a];
        // u -> v has residual capacity.
        if (label_[u] == unreached && residual_[mate_[a]] > 0.0) {
          label_[u] = label_[v] + 1;
          queue.push_back(u);
        }
      }
    }
  };
  bfs(sink_, 0);
  if (label_[source_] == unreached) {
    bfs(source_, n_);
  } else {
    // Cannot happen for a preflow; keep the source label fixed regardless.
    label_[source_] = n_;
  }

  for (std::size_t v = 0; v < n_; ++v) {
    current_[v] = first_[v];
    if (v == source_ || v == sink_) continue;
    bucket_insert(v);
    activate(v);
  }
}

void PushRelabel::push(std::size_t a) {
  const std::size_t u = head_[mate_[a]];
  const std::size_t v = head_[a];
  double delta;
  if (excess_[u] >= residual_[a]) {
    delta = residual_[a];
    residual_[a] = 0.0;
  } else {
    delta = excess_[u];
    residual_[a] -= delta;
  }
  residual_[mate_[a]] += delta;
  if (delta == excess_[u]) {
    excess_[u] = 0.0;
  } else {
    excess_[u] -= delta;
  }
  excess_[v] += delta;
  activate(v);
}

void PushRelabel::gap(std::size_t label) {
  for (std::size_t l = label + 1; l < n_; ++l) {
    for (std::size_t v = all_head_[l]; v != kNil;) {
      const std::size_t following = next_[v];
      label_[v] = n_ + 1;
      current_[v] = first_[v];
      if (is_active_[v]) {
        active_[n_ + 1].push_back(v);
        highest_ = std::max(highest_, n_ + 1);
      }
      v = following;
    }
    all_head_[l] = kNil;
    count_[l] = 0;
  }
}

void PushRelabel::relabel(std::size_t u) {
  ++relabels_since_global_;
  const std::size_t old = label_[u];
  bucket_remove(u);
  std::size_t lowest = 2 * n_;
  for (std::size_t a = first_[u]; a < first_[u + 1]; ++a) {
    if (residual_[a] > 0.0) lowest = std::min(lowest, label_[head_[a]]);
  }
  std::size_t fresh = std::min(lowest + 1, 2 * n_);
  if (old < n_ && count_[old] == 0) {
    gap(old);
    fresh = std::max(fresh, n_ + 1);
  }
  label_[u] = fresh;
  current_[u] = first_[u];
  bucket_insert(u);
}

MinCut PushRelabel::solve(const FlowNetwork& network) {
  build(network);
  label_[source_] = n_;
  for (std::size_t a = first_[source_]; a < first_[source_ + 1]; ++a) {
    const double cap = residual_[a];
    if (cap <= 0.0) continue;
    residual_[a] = 0.0;
    residual_[mate_[a]] += cap;
    excess_[head_[a]] += cap;
  }
  global_relabel();

  while (true) {
    while (highest_ > 0 && active_[highest_].empty()) --highest_;
    if (active_[highest_].empty()) break;
    const std::size_t level = highest_;
    const std::size_t u = active_[level].back();
    active_[level].pop_back();
    if (!is_active_[u] || label_[u] != level) continue;
    is_active_[u] = false;

    // Discharge u.
    while (excess_[u] > 0.0 && label_[u] < 2 * n_) {
      if (current_[u] == first_[u + 1]) {
        relabel(u);
        if (relabels_since_global_ > n_) break;
        continue;
      }
      const std::size_t a = current_[u];
      if (residual_[a] > 0.0 && label_[u] == label_[head_[a]] + 1) {
        push(a);
      } else {
        ++current_[u];
      }
    }
    if (relabels_since_global_ > n_) {
      global_relabel();
    } else if (excess_[u] > 0.0) {
      activate(u);
    }
  }

  MinCut cut;
  cut.flow_value = excess_[sink_] + network.offset();
  cut.source_side.assign(n_, false);
  std::vector<std::size_t> stack{source_};
  cut.source_side[source_] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t a = first_[v]; a < first_[v + 1]; ++a) {
      const std::size_t w = head_[a];
      if (!cut.source_side[w] && residual_[a] > 0.0) {
        cut.source_side[w] = true;
        stack.push_back(w);
      }
    }
  }
  if (cut.source_side[sink_]) {
    throw InternalError("max-flow terminated with an augmenting path");
  }
  return cut;
}

MinCut max_flow_min_cut(const FlowNetwork& network) {
  PushRelabel solver;
  return solver.solve(network);
}

double cut_capacity(const FlowNetwork& network,
                    const std::vector<bool>& source_side) {
  if (source_side.size() != network.num_nodes() ||
      !source_side[network.source()] || source_side[network.sink()]) {
    throw InvalidArgument("cut must contain the source and exclude the sink");
  }
  double total = network.offset();
  for (const Arc& a : network.arcs()) {
    if (source_side[a.from] && !source_side[a.to]) total += a.capacity;
  }
  return total;
}

}  // namespace neariso
