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
#include <string>
#include <vector>

#include "neariso/simulation.hpp"

namespace neariso {

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
};

enum class BlockKind { cubic2d, cubic1d };

BlockKind parse_block_kind(const std::string& name);

struct BlockMatrixSpec {
  std::size_t k = 16;  // block side
  std::size_t m = 2;   // repetitions per axis
  BlockKind kind = BlockKind::cubic2d;
  double sigma = 0.25;
  std::size_t reps = 100;
  std::uint64_t seed = 20260101;
};

/// U_ij = (x_i + x_j - 1)^3 or (2 x_i - 1)^3 with x_i = (i-1)/(k-1), tiled
/// m times along both axes. Throws InvalidArgument for k < 2.
Matrix generate_block_matrix(const BlockMatrixSpec& spec);

/// Projection onto matrices nondecreasing along rows and columns, computed
/// as the prox on the grid digraph at a lambda large enough that no edge can
/// stay violated.
Matrix bivariate_isotonic(const Matrix& y);

/// Number of connected components of the grid graph after merging adjacent
/// cells whose values differ by at most group_tol * range.
std::size_t count_constant_components(const Matrix& theta,
                                      double group_tol = 1e-9);

/// Nearly-isotonic prox on the grid, SURE-tuned over a log grid of lambdas
/// on [1e-3, side] * sigma.
Matrix estimate_neariso2(const Matrix& y, double sigma,
                         std::size_t grid_size = 30);

/// Bivariate isotonic regression on each k x k block.
Matrix estimate_block_oracle(const Matrix& y, std::size_t k);

struct GridExperimentSpec {
  BlockKind kind = BlockKind::cubic2d;
  std::size_t m = 2;
  std::vector<std::size_t> k_list = {8, 16};
  double sigma = 0.25;
  std::size_t reps = 100;
  std::uint64_t seed = 20260101;
  std::size_t max_side = 64;
  std::size_t lambda_grid = 30;
  std::size_t threads = 0;
};

/// MSE of LSE, Neariso2 and PO; rows use n = (m k)^2.
RiskTable run_grid_experiment(const GridExperimentSpec& spec);

/// Row-major CSV, one matrix row per line.
Matrix read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const Matrix& matrix);

}  // namespace neariso
