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

#include "neariso/prox.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neariso/error.hpp"
#include "neariso/kkt.hpp"
#include "neariso/maxflow.hpp"
#include "neariso/signal.hpp"

namespace neariso {

namespace {

// Subproblem on a node set N with the set function
//   F_N(B) = d + sum_{i in N \ B} a_i + sum_{i in B} b_i + c(B -> N \ B).
// Nodes are global indices; a and b are parallel to them.
struct Task {
  std::vector<std::size_t> nodes;
  std::vector<double> a;
  std::vector<double> b;
  double d = 0.0;
  std::size_t depth = 1;
};

struct Adjacency {
  // CSR out- and in-lists of (neighbour, weight).
  std::vector<std::size_t> out_first, in_first;
  std::vector<std::pair<std::size_t, double>> out, in;

  explicit Adjacency(const WeightedDigraph& g) {
    const std::size_t n = g.num_nodes();
    out_first.assign(n + 1, 0);
    in_first.assign(n + 1, 0);
    for (const Edge& e : g.edges()) {
      ++out_first[e.from + 1];
      ++in_first[e.to + 1];
    }
    for (std::size_t v = 0; v < n; ++v) {
      out_first[v + 1] += out_first[v];
      in_first[v + 1] += in_first[v];
    }
    out.resize(g.edges().size());
    in.resize(g.edges().size());
    std::vector<std::size_t> po(out_first.begin(), out_first.end() - 1);
    std::vector<std::size_t> pi(in_first.begin(), in_first.end() - 1);
    for (const Edge& e : g.edges()) {
      out[po[e.from]++] = {e.to, e.weight};
      in[pi[e.to]++] = {e.from, e.weight};
    }
  }
};

constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

}  // namespace

ProxResult prox(const WeightedDigraph& graph, std::span<const double> y,
                double lambda, ProxOptions options) {
  const std::size_t n = graph.num_nodes();
  if (y.size() != n) {
    throw InvalidArgument("signal length " + std::to_string(y.size()) +
                          " does not match graph with " + std::to_string(n) +
                          " nodes");
  }
  require_finite(y, "signal");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lambda must be finite and >= 0");
  }

  ProxResult result;
  result.theta_hat.assign(y.begin(), y.end());
  if (n == 0) return result;
  if (lambda == 0.0 || graph.edges().empty()) {
    result.recursion_depth = 1;
    return result;
  }

  const Adjacency adj(graph);
  // Position of a global node within the current task, or kAbsent.
  std::vector<std::size_t> local(n, kAbsent);
  std::vector<bool> upper(n, false);
  PushRelabel solver;

  std::vector<Task> stack;
  {
    Task root;
    root.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) root.nodes[i] = i;
    root.a.assign(n, 0.0);
    root.b.assign(n, 0.0);
    stack.push_back(std::move(root));
  }

  std::vector<double> u;
  while (!stack.empty()) {
    Task task = std::move(stack.back());
    stack.pop_back();
    result.recursion_depth = std::max(result.recursion_depth, task.depth);
    const std::size_t k = task.nodes.size();

    double sum_y = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      sum_y += y[task.nodes[p]];
      sum_a += task.a[p];
      sum_b += task.b[p];
    }
    const double alpha =
        (sum_y - lambda * (task.d + sum_b)) / static_cast<double>(k);
    auto settle = [&] {
      for (std::size_t v : task.nodes) result.theta_hat[v] = alpha;
    };
    if (k == 1) {
      settle();
      continue;
    }

    for (std::size_t p = 0; p < k; ++p) local[task.nodes[p]] = p;
    u.resize(k);
    double sum_abs_u = 0.0, sum_pos_u = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      u[p] = y[task.nodes[p]] - alpha;
      sum_abs_u += std::abs(u[p]);
      sum_pos_u += std::max(u[p], 0.0);
    }

    // Minimise lambda F_N(B) - u(B) as an s-t cut with S = {s} + B.
    const std::size_t s = k, t = k + 1;
    FlowNetwork net(k + 2, s, t);
    for (std::size_t p = 0; p < k; ++p) {
      net.add_arc(s, p, lambda * task.a[p] + std::max(u[p], 0.0));
      net.add_arc(p, t, lambda * task.b[p] + std::max(-u[p], 0.0));
      const std::size_t v = task.nodes[p];
      for (std::size_t e = adj.out_first[v]; e < adj.out_first[v + 1]; ++e) {
        const auto [w, c] = adj.out[e];
        if (local[w] != kAbsent) net.add_arc(p, local[w], lambda * c);
      }
    }
    net.set_offset(lambda * task.d - sum_pos_u);
    const MinCut cut = solver.solve(net);
    ++result.maxflow_calls;

    std::size_t size_a = 0;
    for (std::size_t p = 0; p < k; ++p) {
      upper[task.nodes[p]] = cut.source_side[p];
      size_a += cut.source_side[p] ? 1 : 0;
    }
    // Value of lambda F_N(A) - u(A), evaluated from the set itself.
    double value = lambda * task.d;
    double cut_c = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const std::size_t v = task.nodes[p];
      if (upper[v]) {
        value += lambda * task.b[p] - u[p];
        for (std::size_t e = adj.out_first[v]; e < adj.out_first[v + 1]; ++e) {
          const auto [w, c] = adj.out[e];
          if (local[w] != kAbsent && !upper[w]) cut_c += c;
        }
      } else {
        value += lambda * task.a[p];
      }
    }
    value += lambda * cut_c;
    const double eps =
        options.cut_tol *
        (1.0 + sum_abs_u + lambda * (std::abs(task.d) + sum_a + sum_b));

    if (size_a == 0 || size_a == k || value >= -eps) {
      for (std::size_t v : task.nodes) {
        local[v] = kAbsent;
        upper[v] = false;
      }
      settle();
      continue;
    }

    Task hi, lo;
    hi.depth = lo.depth = task.depth + 1;
    hi.nodes.reserve(size_a);
    lo.nodes.reserve(k - size_a);
    double lower_a = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const std::size_t v = task.nodes[p];
      if (upper[v]) {
        // Reduction onto A: edges leaving A become sink arcs.
        double leaving = 0.0;
        for (std::size_t e = adj.out_first[v]; e < adj.out_first[v + 1]; ++e) {
          const auto [w, c] = adj.out[e];
          if (local[w] != kAbsent && !upper[w]) leaving += c;
        }
        hi.nodes.push_back(v);
        hi.a.push_back(task.a[p]);
        hi.b.push_back(task.b[p] + leaving);
      } else {
        // Contraction by A: edges entering from A become source arcs.
        double entering = 0.0;
        for (std::size_t e = adj.in_first[v]; e < adj.in_first[v + 1]; ++e) {
          const auto [w, c] = adj.in[e];
          if (local[w] != kAbsent && upper[w]) entering += c;
        }
        lower_a += task.a[p];
        lo.nodes.push_back(v);
        lo.a.push_back(task.a[p] + entering);
        lo.b.push_back(task.b[p]);
      }
    }
    hi.d = task.d + lower_a;
    lo.d = -lower_a - cut_c;

    for (std::size_t v : task.nodes) {
      local[v] = kAbsent;
      upper[v] = false;
    }
    // The reduction branch is processed first.
    stack.push_back(std::move(lo));
    stack.push_back(std::move(hi));
  }

  if (options.certify) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - result.theta_hat[i];
    result.kkt_residual = kkt_residual(graph, r, result.theta_hat, lambda);
  }
  return result;
}

std::vector<double> fused_lasso(std::span<const double> y, double lambda) {
  ProxOptions options;
  options.certify = false;
  return prox(build_symmetric_chain(y.size()), y, lambda, options).theta_hat;
}

}  // namespace neariso
