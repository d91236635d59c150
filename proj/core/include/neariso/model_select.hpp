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

#include "neariso/signal.hpp"

namespace neariso {

/// Sieve of total-variation budgets, v(j) = j^{3/2} for j >= 1.
double sieve_budget(std::size_t j);

/// Projection onto {theta nondecreasing, theta_last - theta_first <= budget}.
/// Solved as the isotonic fit of (y_1 + mu, y_2, ..., y_n - mu) with mu >= 0
/// found by bisection on the resulting total variation.
std::vector<double> project_bounded_monotone(std::span<const double> y,
                                             double budget);

struct ModelSelectOptions {
  double c_pen = 1.0;
  std::size_t n_cap = 14;
  // false: select among plain partitions (unbounded budgets, penalty
  // c_pen sigma^2 m log(e n / m) only).
  bool sieve = true;
};

/// A connected partition with one sieve budget per piece.
struct PartitionChoice {
  std::vector<IndexRange> pieces;
  std::vector<std::size_t> sieve_index;  // j per piece; 0 when sieve is off
  std::vector<double> budgets;           // v(j); +inf when sieve is off

  // 0-based starts of pieces 2..m.
  std::vector<std::size_t> boundaries() const;
};

struct ModelSelectResult {
  PartitionChoice choice;
  std::vector<double> fitted;
  double objective = 0.0;
};

/// Penalty of a candidate: c_pen (sum_i sigma^{4/3} |A_i|^{1/3} V_i^{2/3}
/// + sigma^2 m log(e n / m)).
double model_select_penalty(std::span<const IndexRange> pieces,
                            std::span<const double> budgets, std::size_t n,
                            double sigma, double c_pen);

/// Exhaustive search over all 2^{n-1} connected partitions and the budgets
/// v(1..j_max) per piece, j_max the first index with v(j) >= range(y).
/// Ties prefer fewer pieces, then lexicographically smaller boundaries, then
/// smaller budgets. Throws PreconditionError when n > n_cap.
ModelSelectResult model_select(std::span<const double> y, double sigma,
                               const ModelSelectOptions& options = {});

}  // namespace neariso
