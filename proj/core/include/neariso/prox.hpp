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

#include "neariso/graph.hpp"

namespace neariso {

struct ProxOptions {
  // Relative threshold for the "no improving cut" test.
  double cut_tol = 1e-11;
  // Compute the dual certificate of the returned point.
  bool certify = true;
};

struct ProxResult {
  std::vector<double> theta_hat;
  std::size_t recursion_depth = 0;
  std::size_t maxflow_calls = 0;
  double kkt_residual = 0.0;  // 0 when not certified
};

/// Exact proximal operator of lambda * penalty(graph, .) at y, i.e.
///   argmin 1/2 |y - theta|^2 + lambda sum c_(i,j) (theta_i - theta_j)_+,
/// by divide and conquer over minimum cuts.
ProxResult prox(const WeightedDigraph& graph, std::span<const double> y,
                double lambda, ProxOptions options = {});

/// 1-D total-variation denoising via prox on the symmetric chain.
std::vector<double> fused_lasso(std::span<const double> y, double lambda);

}  // namespace neariso
