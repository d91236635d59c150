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

#include "neariso/path.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "neariso/error.hpp"

namespace neariso {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Relative window inside which collision times count as simultaneous.
constexpr double kMergeWindow = 1e-12;

struct Collision {
  double time;
  std::size_t left;
  std::size_t right;

  bool operator>(const Collision& other) const {
    if (time != other.time) return time > other.time;
    return left > other.left;
  }
};

std::vector<double> resolve_weights(std::span<const double> weights,
                                    std::size_t n) {
  const std::size_t edges = n == 0 ? 0 : n - 1;
  if (weights.empty()) return std::vector<double>(edges, 1.0);
  if (weights.size() != edges) {
    throw InvalidWeights("expected " + std::to_string(edges) +
                         " edge weights, got " + std::to_string(weights.size()));
  }
  return {weights.begin(), weights.end()};
}

// Merge-tree builder. Alive nodes form a doubly linked list in index order.
class PathBuilder {
 public:
  PathBuilder(std::span<const double> y, std::span<const double> weights)
      : n_(y.size()), weights_(weights) {
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= n_; ++i) {
      if (i == n_ || y[i] != y[begin]) {
        add_node({{begin, i}, 0.0, kInf, y[begin], 0.0});
        begin = i;
      }
    }
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      prev_[id] = id == 0 ? kNone : id - 1;
      next_[id] = id + 1 == nodes_.size() ? kNone : id + 1;
    }
    for (std::size_t id = 0; id < nodes_.size(); ++id) set_slope(id, 0.0);
    for (std::size_t id = 0; id + 1 < nodes_.size(); ++id) {
      schedule(id, id + 1, 0.0);
    }
  }

  void run(std::vector<double>& breakpoints) {
    breakpoints.assign(1, 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> batch;
    while (!queue_.empty()) {
      const Collision top = queue_.top();
      queue_.pop();
      if (!valid(top)) continue;
      const double t = top.time;
      const double window = t + kMergeWindow * std::abs(t);
      batch.assign(1, {top.left, top.right});
      while (!queue_.empty() && queue_.top().time <= window) {
        const Collision c = queue_.top();
        queue_.pop();
        if (valid(c)) batch.emplace_back(c.left, c.right);
      }
      merge(batch, t);
      if (t > breakpoints.back()) breakpoints.push_back(t);
    }
  }

  std::vector<PathNode> take_nodes() { return std::move(nodes_); }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  std::size_t add_node(PathNode node) {
    nodes_.push_back(node);
    prev_.push_back(kNone);
    next_.push_back(kNone);
    return nodes_.size() - 1;
  }

  bool alive(std::size_t id) const { return nodes_[id].death == kInf; }

  bool valid(const Collision& c) const {
    return alive(c.left) && alive(c.right) && next_[c.left] == c.right;
  }

  // Slope of a group from the knot signs on either side:
  // (c_left s_left - c_right s_right) / |A|.
  void set_slope(std::size_t id, double lambda) {
    PathNode& node = nodes_[id];
    const double v = node.value_at(lambda);
    double rate = 0.0;
    if (const std::size_t l = prev_[id]; l != kNone) {
      if (nodes_[l].value_at(lambda) > v) rate += weights_[node.range.begin - 1];
    }
    if (const std::size_t r = next_[id]; r != kNone) {
      if (v > nodes_[r].value_at(lambda)) rate -= weights_[node.range.end - 1];
    }
    node.slope = rate / static_cast<double>(node.range.size());
  }

  // Queues the time at which the gap between adjacent groups closes, if it
  // closes at all.
  void schedule(std::size_t left, std::size_t right, double lambda) {
    const PathNode& a = nodes_[left];
    const PathNode& b = nodes_[right];
    const double gap = b.value_at(lambda) - a.value_at(lambda);
    if (gap == 0.0) {
      queue_.push({lambda, left, right});
      return;
    }
    const double closing = a.slope - b.slope;
    if (closing == 0.0) return;
    const double delta = gap / closing;
    if (delta > 0.0 && std::isfinite(delta)) {
      queue_.push({lambda + delta, left, right});
    }
  }

  void merge(std::vector<std::pair<std::size_t, std::size_t>>& batch,
             double lambda) {
    std::sort(batch.begin(), batch.end(), [&](const auto& p, const auto& q) {
      return nodes_[p.first].range.begin < nodes_[q.first].range.begin;
    });
    batch.erase(std::unique(batch.begin(), batch.end()), batch.end());

    std::vector<std::size_t> created;
    std::size_t i = 0;
    while (i < batch.size()) {
      // Extend the run while consecutive pairs share a node.
      std::size_t j = i;
      while (j + 1 < batch.size() && batch[j + 1].first == batch[j].second) ++j;
      const std::size_t first = batch[i].first;
      const std::size_t last = batch[j].second;

      double mass = 0.0;
      double weight = 0.0;
      for (std::size_t id = first;; id = next_[id]) {
        const double size = static_cast<double>(nodes_[id].range.size());
        mass += size * nodes_[id].value_at(lambda);
        weight += size;
        nodes_[id].death = lambda;
        if (id == last) break;
      }
      const std::size_t before = prev_[first];
      const std::size_t after = next_[last];
      const std::size_t id = add_node({{nodes_[first].range.begin,
                                        nodes_[last].range.end},
                                       lambda, kInf, mass / weight, 0.0});
      prev_[id] = before;
      next_[id] = after;
      if (before != kNone) next_[before] = id;
      if (after != kNone) prev_[after] = id;
      created.push_back(id);
      i = j + 1;
    }

    // Neighbour slopes are unchanged: a knot keeps its sign until its two
    // sides collide.
    for (std::size_t id : created) set_slope(id, lambda);
    for (std::size_t id : created) {
      if (prev_[id] != kNone) schedule(prev_[id], id, lambda);
      if (next_[id] != kNone && alive(next_[id])) {
        const bool next_is_new =
            std::find(created.begin(), created.end(), next_[id]) != created.end();
        if (!next_is_new) schedule(id, next_[id], lambda);
      }
    }
  }

  std::size_t n_;
  std::span<const double> weights_;
  std::vector<PathNode> nodes_;
  std::vector<std::size_t> prev_, next_;
  std::priority_queue<Collision, std::vector<Collision>, std::greater<>> queue_;
};

}  // namespace

bool validate_weights(std::span<const double> weights) {
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j])) {
      throw InvalidWeights("edge weight " + std::to_string(j + 1) +
                           " is not a positive finite number");
    }
  }
  for (std::size_t j = 0; j + 1 < weights.size(); ++j) {
    const double left = j == 0 ? 0.0 : weights[j - 1];
    if (left + weights[j + 1] > 2.0 * weights[j]) return false;
  }
  return true;
}

std::vector<double> design_weights(std::span<const double> design) {
  require_finite(design, "design");
  std::vector<double> w;
  if (design.size() < 2) return w;
  w.reserve(design.size() - 1);
  for (std::size_t i = 0; i + 1 < design.size(); ++i) {
    const double gap = design[i + 1] - design[i];
    if (!(gap > 0.0)) {
      throw InvalidSignal("design is not strictly increasing at index " +
                          std::to_string(i + 1));
    }
    w.push_back(1.0 / gap);
  }
  return w;
}

SolutionPath solve_path(std::span<const double> y,
                        std::span<const double> weights, PathOptions options) {
  if (y.empty()) throw InvalidSignal("signal is empty");
  require_finite(y, "signal");

  SolutionPath path;
  path.n_ = y.size();
  path.weights_ = resolve_weights(weights, y.size());
  if (!validate_weights(path.weights_)) {
    if (!options.force) {
      throw InvalidWeights(
          "edge weights violate c_{j-1} + c_{j+1} <= 2 c_j; the path would not "
          "be exact (pass force to run anyway)");
    }
    path.heuristic_ = true;
  }

  PathBuilder builder(y, path.weights_);
  builder.run(path.breakpoints_);
  path.nodes_ = builder.take_nodes();
  return path;
}

std::vector<PathGroup> SolutionPath::state_at(double lambda) const {
  std::vector<PathGroup> groups;
  for (const PathNode& node : nodes_) {
    if (node.birth <= lambda && lambda < node.death) {
      groups.push_back({node.range, node.value_at(lambda), node.slope});
    }
  }
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    return a.range.begin < b.range.begin;
  });
  return groups;
}

std::vector<PathGroup> SolutionPath::state_at_breakpoint(std::size_t i) const {
  return state_at(breakpoints_.at(i));
}

std::vector<double> SolutionPath::evaluate(double lambda) const {
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  std::vector<double> theta(n_);
  for (const PathNode& node : nodes_) {
    if (node.birth <= lambda && lambda < node.death) {
      const double v = node.value_at(lambda);
      std::fill(theta.begin() + static_cast<std::ptrdiff_t>(node.range.begin),
                theta.begin() + static_cast<std::ptrdiff_t>(node.range.end), v);
    }
  }
  return theta;
}

std::vector<double> eval_path(const SolutionPath& path, double lambda) {
  return path.evaluate(lambda);
}

std::vector<double> isotonic(std::span<const double> y,
                             std::span<const double> obs_weights) {
  if (y.empty()) return {};
  require_finite(y, "signal");
  if (!obs_weights.empty() && obs_weights.size() != y.size()) {
    throw InvalidWeights("observation weights must match the signal length");
  }
  struct Block {
    double sum;     // weighted sum
    double weight;
    std::size_t count;
    double mean() const { return sum / weight; }
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = obs_weights.empty() ? 1.0 : obs_weights[i];
    if (!(w > 0.0)) throw InvalidWeights("observation weights must be positive");
    blocks.push_back({w * y[i], w, 1});
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].mean() >= blocks.back().mean()) {
      Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().weight += top.weight;
      blocks.back().count += top.count;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  std::size_t i = 0;
  for (const Block& b : blocks) {
    // Singleton blocks keep the datum exactly.
    const double v = b.count == 1 ? y[i] : b.mean();
    out.insert(out.end(), b.count, v);
    i += b.count;
  }
  return out;
}

double weighted_lower_variation(std::span<const double> theta,
                                std::span<const double> weights) {
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
    const double c = weights.empty() ? 1.0 : weights[i];
    v += c * std::max(theta[i] - theta[i + 1], 0.0);
  }
  return v;
}

ConstrainedFit solve_constrained(std::span<const double> y, double budget,
                                 std::span<const double> weights) {
  if (!(budget >= 0.0)) throw InvalidArgument("budget must be >= 0");
  const SolutionPath path = solve_path(y, weights);
  const auto w = path.weights();
  if (weighted_lower_variation(y, w) <= budget) {
    return {{y.begin(), y.end()}, 0.0};
  }

  // The penalty of the fit is continuous, piecewise linear and nonincreasing
  // in lambda; bracket the crossing between breakpoints and interpolate.
  const auto bps = path.breakpoints();
  auto pen_at = [&](std::size_t i) {
    return weighted_lower_variation(path.evaluate(bps[i]), w);
  };
  std::size_t lo = 0, hi = bps.size() - 1;
  if (pen_at(hi) > budget) return {path.evaluate(bps[hi]), bps[hi]};
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (pen_at(mid) <= budget) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double p_lo = pen_at(lo);
  const double p_hi = pen_at(hi);
  double lambda = bps[hi];
  if (p_lo > p_hi) {
    lambda = bps[lo] + (p_lo - budget) / (p_lo - p_hi) * (bps[hi] - bps[lo]);
    lambda = std::clamp(lambda, bps[lo], bps[hi]);
  }
  return {path.evaluate(lambda), lambda};
}

}  // namespace neariso
