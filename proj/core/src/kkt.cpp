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

#include "neariso/kkt.hpp"

#include <algorithm>
#include <cmath>

#include "neariso/error.hpp"
#include "neariso/maxflow.hpp"

namespace neariso {

double kkt_residual(const WeightedDigraph& graph, std::span<const double> r,
                    std::span<const double> theta, double lambda,
                    double tie_tol) {
  const std::size_t n = graph.num_nodes();
  if (r.size() != n || theta.size() != n) {
    throw InvalidArgument("kkt_residual: vector length does not match graph");
  }
  // Demand left after the edges whose dual value is forced.
  std::vector<double> demand(r.begin(), r.end());
  std::vector<const Edge*> tied;
  for (const Edge& e : graph.edges()) {
    const double diff = theta[e.from] - theta[e.to];
    if (std::abs(diff) <= tie_tol) {
      tied.push_back(&e);
    } else if (diff > 0.0) {
      demand[e.from] -= lambda * e.weight;
      demand[e.to] += lambda * e.weight;
    }
  }

  const std::size_t s = n, t = n + 1;
  FlowNetwork net(n + 2, s, t);
  double supply = 0.0, sink = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (demand[i] > 0.0) {
      net.add_arc(s, i, demand[i]);
      supply += demand[i];
    } else if (demand[i] < 0.0) {
      net.add_arc(i, t, -demand[i]);
      sink -= demand[i];
    }
  }
  for (const Edge* e : tied) net.add_arc(e->from, e->to, lambda * e->weight);
  const double flow = max_flow_min_cut(net).flow_value;
  return std::max({supply - flow, sink - flow, 0.0});
}

double kkt_residual(const WeightedDigraph& graph, std::span<const double> r,
                    std::span<const double> theta, double lambda) {
  double scale = 0.0;
  for (double v : theta) scale = std::max(scale, std::abs(v));
  return kkt_residual(graph, r, theta, lambda, 1e-9 * (1.0 + scale));
}

}  // namespace neariso
