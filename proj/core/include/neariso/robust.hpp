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
#include <string>
#include <vector>

#include "neariso/graph.hpp"

namespace neariso {

/// Separable smooth loss sum_i l(theta_i - y_i).
struct SmoothLoss {
  enum class Kind { squared, huber };

  Kind kind = Kind::squared;
  double delta = 0.01;     // Huber threshold
  double lipschitz = 1.0;  // bound on l''

  static SmoothLoss squared() { return {}; }
  static SmoothLoss huber(double delta) {
    return {Kind::huber, delta, 1.0};
  }

  double value(double u) const;
  double derivative(double u) const;
};

/// Parses "squared" or "huber:DELTA". Throws InvalidArgument.
SmoothLoss parse_loss(const std::string& text);

struct SolverConfig {
  std::size_t max_iter = 5000;
  double tol = 1e-9;        // relative objective change
  double grad_tol = 1e-10;  // sup-norm of the gradient mapping, relative to 1 + |y|_inf
  bool restart = true;      // restart momentum when the objective increases
};

struct FitResult {
  std::vector<double> theta;
  double lambda = 0.0;
  double mu = 0.0;
  double objective = 0.0;
  double df = 0.0;
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
  std::vector<double> objective_history;
};

double loss_value(const SmoothLoss& loss, std::span<const double> theta,
                  std::span<const double> y);

/// FISTA on L(theta; y) + lambda * penalty(graph, theta) with step 1/L and
/// the graph prox as proximal oracle, started at theta = y. Non-convergence
/// within max_iter sets converged = false.
FitResult fista_fit(const WeightedDigraph& graph, std::span<const double> y,
                    double lambda, const SmoothLoss& loss,
                    const SolverConfig& config = {});

}  // namespace neariso
