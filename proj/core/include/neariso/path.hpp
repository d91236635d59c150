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
#include <limits>
#include <span>
#include <vector>

#include "neariso/signal.hpp"

namespace neariso {

/// A constant group of the path between two breakpoints.
struct PathGroup {
  IndexRange range;
  double value = 0.0;
  double slope = 0.0;
};

/// One node of the merge tree recorded by the path solver. The node is alive
/// for lambda in [birth, death) and takes the value
/// value + slope * (lambda - birth) on its range.
struct PathNode {
  IndexRange range;
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();
  double value = 0.0;
  double slope = 0.0;

  double value_at(double lambda) const {
    return value + slope * (lambda - birth);
  }
};

struct PathOptions {
  // Run the solver even when the edge weights fail validate_weights(); the
  // resulting path is flagged heuristic.
  bool force = false;
};

/// Exact solution path of
///   argmin 1/2 |y - theta|^2 + lambda sum_i c_i (theta_i - theta_{i+1})_+
/// over all lambda >= 0. Immutable once built.
class SolutionPath {
 public:
  std::size_t size() const { return n_; }

  /// lambda_0 = 0 < lambda_1 < ... < lambda_N.
  std::span<const double> breakpoints() const { return breakpoints_; }
  double terminal_lambda() const { return breakpoints_.back(); }

  std::span<const double> weights() const { return weights_; }
  std::span<const PathNode> nodes() const { return nodes_; }
  bool heuristic() const { return heuristic_; }

  /// Groups alive at breakpoint i, valued at lambda_i.
  std::vector<PathGroup> state_at_breakpoint(std::size_t i) const;

  /// Groups alive at lambda, valued at lambda.
  std::vector<PathGroup> state_at(double lambda) const;

  std::vector<double> evaluate(double lambda) const;

 private:
  friend SolutionPath solve_path(std::span<const double>,
                                 std::span<const double>, PathOptions);

  std::size_t n_ = 0;
  std::vector<double> breakpoints_;
  std::vector<double> weights_;
  std::vector<PathNode> nodes_;
  bool heuristic_ = false;
};

/// Concavity test c_{j-1} + c_{j+1} <= 2 c_j (1-based, c_0 := 0) for every j
/// that has a right neighbour. Under it the path is agglomerative and the
/// solver is exact. Throws InvalidWeights for a nonpositive or non-finite
/// weight.
bool validate_weights(std::span<const double> weights);

/// Edge weights c_i = 1 / (x_{i+1} - x_i) for a strictly increasing design.
std::vector<double> design_weights(std::span<const double> design);

/// Modified pool-adjacent-violators path. An empty `weights` means unit
/// weights; otherwise it must have y.size() - 1 entries. Throws InvalidWeights
/// for weights failing validation unless options.force is set.
SolutionPath solve_path(std::span<const double> y,
                        std::span<const double> weights = {},
                        PathOptions options = {});

std::vector<double> eval_path(const SolutionPath& path, double lambda);

/// Least-squares projection onto nondecreasing vectors (pool adjacent
/// violators). `obs_weights`, when nonempty, weights the squared errors.
std::vector<double> isotonic(std::span<const double> y,
                             std::span<const double> obs_weights = {});

struct ConstrainedFit {
  std::vector<double> theta;
  double lambda = 0.0;
};

/// argmin |y - theta|^2 subject to sum_i c_i (theta_i - theta_{i+1})_+ <= V,
/// solved by inverting the penalized path. Returns the fit and its Lagrange
/// multiplier.
ConstrainedFit solve_constrained(std::span<const double> y, double budget,
                                 std::span<const double> weights = {});

/// sum_i c_i (theta_i - theta_{i+1})_+ with unit weights when `weights` is
/// empty.
double weighted_lower_variation(std::span<const double> theta,
                                std::span<const double> weights = {});

}  // namespace neariso
