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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "neariso/error.hpp"
#include "neariso/grid2d.hpp"
#include "oracles.hpp"

namespace neariso {
namespace {

// Rows of A for theta(r, c) <= theta(r, c + 1) and theta(r, c) <= theta(r + 1, c).
std::vector<std::vector<double>> grid_order_constraints(std::size_t rows, std::size_t cols) {
  std::vector<std::vector<double>> A;
  auto add = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> row(rows * cols, 0.0);
    row[lo] = 1.0;
    row[hi] = -1.0;
    A.push_back(row);
  };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) add(r * cols + c, r * cols + c + 1);
      if (r + 1 < rows) add(r * cols + c, (r + 1) * cols + c);
    }
  }
  return A;
}

TEST(BlockMatrix, SmallestTiling) {
  BlockMatrixSpec spec;
  spec.k = 2;
  spec.m = 2;
  const auto m = generate_block_matrix(spec);
  ASSERT_EQ(m.rows, 4u);
  ASSERT_EQ(m.cols, 4u);
  const std::vector<double> expected{-1, 0, -1, 0,  //
                                     0,  1, 0,  1,  //
                                     -1, 0, -1, 0,  //
                                     0,  1, 0,  1};
  EXPECT_EQ(m.data, expected);
  spec.kind = BlockKind::cubic1d;
  const auto rowwise = generate_block_matrix(spec);
  EXPECT_EQ(rowwise(0, 1), -1.0);
  EXPECT_EQ(rowwise(1, 0), 1.0);
  spec.k = 1;
  EXPECT_THROW(generate_block_matrix(spec), InvalidArgument);
  EXPECT_EQ(parse_block_kind("cubic1d"), BlockKind::cubic1d);
  EXPECT_THROW(parse_block_kind("square"), InvalidArgument);
}

TEST(BlockMatrix, BlocksAreMonotone) {
  BlockMatrixSpec spec;
  spec.k = 8;
  spec.m = 3;
  const auto m = generate_block_matrix(spec);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if ((c + 1) % 8 != 0 && c + 1 < m.cols) {
        EXPECT_LE(m(r, c), m(r, c + 1));
      }
      if ((r + 1) % 8 != 0 && r + 1 < m.rows) {
        EXPECT_LE(m(r, c), m(r + 1, c));
      }
    }
  }
}

TEST(BivariateIsotonic, MatchesProjectionOracle) {
  std::mt19937_64 rng(163);
  std::normal_distribution<double> z(0.0, 1.0);
  const std::pair<std::size_t, std::size_t> shapes[] = {{2, 2}, {2, 3}, {3, 2}};
  for (int trial = 0; trial < 60; ++trial) {
    const auto [rows, cols] = shapes[trial % 3];
    Matrix y(rows, cols);
    for (double& v : y.data) v = z(rng);
    const auto A = grid_order_constraints(rows, cols);
    const std::vector<double> b(A.size(), 0.0);
    const auto exact = oracle::project_polyhedron(y.data, A, b);
    const auto fit = bivariate_isotonic(y);
    for (std::size_t i = 0; i < y.data.size(); ++i) {
      EXPECT_NEAR(fit.data[i], exact[i], 1e-8);
    }
  }
}

TEST(BivariateIsotonic, MonotoneInputIsFixed) {
  Matrix y(3, 3);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) y(r, c) = static_cast<double>(r + 2 * c);
  }
  const auto fit = bivariate_isotonic(y);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(fit.data[i], y.data[i], 1e-12);
}

TEST(Components, FloodFill) {
  Matrix m(2, 3);
  m.data = {1, 1, 2, 3, 1, 2};
  EXPECT_EQ(count_constant_components(m), 3u);
  m.data = {1, 1, 1, 1, 1, 1};
  EXPECT_EQ(count_constant_components(m), 1u);
}

TEST(Neariso2, FitIsReasonable) {
  BlockMatrixSpec spec;
  spec.k = 6;
  spec.m = 2;
  const auto truth = generate_block_matrix(spec);
  Matrix y = truth;
  const auto noise = gaussian_noise(5, y.data.size(), 0, 0.25);
  for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += noise[i];
  const auto fit = estimate_neariso2(y, 0.25, 10);
  double err_fit = 0.0, err_y = 0.0;
  for (std::size_t i = 0; i < y.data.size(); ++i) {
    err_fit += std::pow(fit.data[i] - truth.data[i], 2);
    err_y += std::pow(y.data[i] - truth.data[i], 2);
  }
  EXPECT_LT(err_fit, err_y);
  EXPECT_THROW(estimate_neariso2(y, 0.0), InvalidArgument);
}

TEST(BlockOracle, FitsEachBlockIndependently) {
  Matrix y(4, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) y(r, c) = static_cast<double>((r % 2) + (c % 2));
  }
  const auto fit = estimate_block_oracle(y, 2);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(fit.data[i], y.data[i], 1e-12);
  EXPECT_THROW(estimate_block_oracle(y, 3), InvalidArgument);
}

TEST(GridExperiment, SmallRun) {
  GridExperimentSpec spec;
  spec.k_list = {4, 6};
  spec.reps = 3;
  spec.lambda_grid = 8;
  spec.threads = 1;
  const auto table = run_grid_experiment(spec);
  ASSERT_EQ(table.rows.size(), 6u);
  EXPECT_NO_THROW(table.row("lse", 64));
  EXPECT_NO_THROW(table.row("neariso2", 144));
  EXPECT_GT(table.row("lse", 144).mse_mean, table.row("po", 144).mse_mean);
  spec.k_list = {40};
  EXPECT_THROW(run_grid_experiment(spec), PreconditionError);
}

TEST(MatrixCsv, RoundTripAndErrors) {
  Matrix m(2, 2);
  m.data = {0.1, -2.0, 3.5, 1e-20};
  std::stringstream io;
  write_matrix_csv(io, m);
  const auto back = read_matrix_csv(io);
  EXPECT_EQ(back.rows, 2u);
  EXPECT_EQ(back.data, m.data);
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_matrix_csv(ragged), InvalidSignal);
  std::istringstream bad("1,x\n");
  EXPECT_THROW(read_matrix_csv(bad), InvalidSignal);
  std::istringstream empty("\n");
  EXPECT_THROW(read_matrix_csv(empty), InvalidSignal);
}

}  // namespace
}  // namespace neariso
