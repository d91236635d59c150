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

#include "neariso/grid2d.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "neariso/error.hpp"
#include "neariso/graph.hpp"
#include "neariso/parallel.hpp"
#include "neariso/prox.hpp"
#include "neariso/tuning.hpp"

namespace neariso {

BlockKind parse_block_kind(const std::string& name) {
  if (name == "cubic2d") return BlockKind::cubic2d;
  if (name == "cubic1d") return BlockKind::cubic1d;
  throw InvalidArgument("unknown block kind '" + name +
                        "' (expected cubic2d or cubic1d)");
}

Matrix generate_block_matrix(const BlockMatrixSpec& spec) {
  if (spec.k < 2) throw InvalidArgument("block size k must be >= 2");
  if (spec.m < 1) throw InvalidArgument("m must be >= 1");
  const std::size_t k = spec.k;
  Matrix block(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const double xi = static_cast<double>(i) / static_cast<double>(k - 1);
    for (std::size_t j = 0; j < k; ++j) {
      const double xj = static_cast<double>(j) / static_cast<double>(k - 1);
      const double u = spec.kind == BlockKind::cubic2d ? xi + xj - 1.0
                                                       : 2.0 * xi - 1.0;
      block(i, j) = u * u * u;
    }
  }
  const std::size_t side = spec.m * k;
  Matrix out(side, side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) out(r, c) = block(r % k, c % k);
  }
  return out;
}

Matrix bivariate_isotonic(const Matrix& y) {
  require_finite(y.data, "matrix");
  if (y.data.size() < 2) return y;
  const WeightedDigraph grid = build_grid2d(y.rows, y.cols);
  // Every edge dual of the projection is bounded by sum |y_i - theta_i|,
  // which is at most N * range; beyond that the penalty acts as a constraint.
  const double range = value_range(y.data);
  double lambda = static_cast<double>(y.data.size()) * range + 1.0;
  const double tol = 1e-9 * (1.0 + range);
  ProxOptions options;
  options.certify = false;
  Matrix out(y.rows, y.cols);
  for (int attempt = 0; attempt < 60; ++attempt) {
    out.data = prox(grid, y.data, lambda, options).theta_hat;
    bool monotone = true;
    for (const Edge& e : grid.edges()) {
      if (out.data[e.from] - out.data[e.to] > tol) {
        monotone = false;
        break;
      }
    }
    if (monotone) return out;
    lambda *= 2.0;
  }
  throw InternalError("bivariate isotonic fit did not reach monotonicity");
}

std::size_t count_constant_components(const Matrix& theta, double group_tol) {
  return constant_components(build_grid2d(theta.rows, theta.cols), theta.data,
                             group_tol);
}

Matrix estimate_neariso2(const Matrix& y, double sigma, std::size_t grid_size) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (grid_size == 0) throw InvalidArgument("lambda grid is empty");
  const WeightedDigraph grid = build_grid2d(y.rows, y.cols);
  const double side = static_cast<double>(std::max(y.rows, y.cols));
  const auto lambdas = log_grid(1e-3 * sigma, side * sigma, grid_size);
  const double n = static_cast<double>(y.data.size());
  ProxOptions options;
  options.certify = false;

  std::vector<TuningCandidate> candidates;
  std::vector<std::vector<double>> fits;
  for (double lambda : lambdas) {
    auto fit = prox(grid, y.data, lambda, options).theta_hat;
    double rss = 0.0;
    for (std::size_t i = 0; i < fit.size(); ++i) {
      rss += (y.data[i] - fit[i]) * (y.data[i] - fit[i]);
    }
    const double df = static_cast<double>(constant_components(grid, fit));
    candidates.push_back(
        {lambda, std::nullopt, rss / n + 2.0 * sigma * sigma * df / n, df});
    fits.push_back(std::move(fit));
  }
  Matrix out(y.rows, y.cols);
  out.data = std::move(fits[argmin_candidate(candidates)]);
  return out;
}

Matrix estimate_block_oracle(const Matrix& y, std::size_t k) {
  if (k == 0 || y.rows % k != 0 || y.cols % k != 0) {
    throw InvalidArgument("block size must divide the matrix dimensions");
  }
  Matrix out(y.rows, y.cols);
  for (std::size_t br = 0; br < y.rows; br += k) {
    for (std::size_t bc = 0; bc < y.cols; bc += k) {
      Matrix block(k, k);
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) block(r, c) = y(br + r, bc + c);
      }
      const Matrix fit = bivariate_isotonic(block);
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) out(br + r, bc + c) = fit(r, c);
      }
    }
  }
  return out;
}

RiskTable run_grid_experiment(const GridExperimentSpec& spec) {
  if (spec.k_list.empty()) throw InvalidArgument("k_list is empty");
  if (spec.reps == 0) throw InvalidArgument("reps must be >= 1");
  if (!(spec.sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  const char* names[] = {"lse", "neariso2", "po"};
  std::vector<RiskRow> rows[3];

  for (std::size_t k : spec.k_list) {
    BlockMatrixSpec block;
    block.k = k;
    block.m = spec.m;
    block.kind = spec.kind;
    const std::size_t side = k * spec.m;
    if (side > spec.max_side) {
      throw PreconditionError("matrix side " + std::to_string(side) +
                              " exceeds the cap " + std::to_string(spec.max_side));
    }
    const Matrix truth = generate_block_matrix(block);
    const std::size_t n = side * side;
    std::vector<double> losses[3];
    for (auto& l : losses) l.assign(spec.reps, 0.0);

    parallel_for(spec.reps, spec.threads, [&](std::size_t rep) {
      Matrix y = truth;
      const auto noise = gaussian_noise(spec.seed, n, rep, spec.sigma);
      for (std::size_t i = 0; i < n; ++i) y.data[i] += noise[i];
      const Matrix fits[3] = {bivariate_isotonic(y),
                              estimate_neariso2(y, spec.sigma, spec.lambda_grid),
                              estimate_block_oracle(y, k)};
      for (int e = 0; e < 3; ++e) {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = fits[e].data[i] - truth.data[i];
          loss += d * d;
        }
        losses[e][rep] = loss / static_cast<double>(n);
      }
    });

    for (int e = 0; e < 3; ++e) {
      const double reps = static_cast<double>(spec.reps);
      double mean = 0.0;
      for (double v : losses[e]) mean += v;
      mean /= reps;
      double ss = 0.0;
      for (double v : losses[e]) ss += (v - mean) * (v - mean);
      const double se = spec.reps > 1 ? std::sqrt(ss / (reps - 1.0) / reps) : 0.0;
      rows[e].push_back({names[e], n, mean, se});
    }
  }

  RiskTable table;
  for (auto& r : rows) table.rows.insert(table.rows.end(), r.begin(), r.end());
  fit_slopes(table);
  return table;
}

Matrix read_matrix_csv(std::istream& in) {
  Matrix m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const auto b = field.find_first_not_of(" \t");
      const auto e = field.find_last_not_of(" \t");
      const std::string f = b == std::string::npos ? "" : field.substr(b, e - b + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() ||
          !std::isfinite(v)) {
        throw InvalidSignal("matrix line " + std::to_string(lineno) +
                            ": cannot parse '" + f + "'");
      }
      row.push_back(v);
    }
    if (m.rows == 0) {
      m.cols = row.size();
    } else if (row.size() != m.cols) {
      throw InvalidSignal("matrix line " + std::to_string(lineno) + ": expected " +
                          std::to_string(m.cols) + " columns");
    }
    m.data.insert(m.data.end(), row.begin(), row.end());
    ++m.rows;
  }
  if (m.rows == 0) throw InvalidSignal("matrix is empty");
  return m;
}

void write_matrix_csv(std::ostream& out, const Matrix& matrix) {
  const auto old = out.precision(17);
  for (std::size_t r = 0; r < matrix.rows; ++r) {
    for (std::size_t c = 0; c < matrix.cols; ++c) {
      if (c) out << ',';
      out << matrix(r, c);
    }
    out << '\n';
  }
  out.precision(old);
}

}  // namespace neariso
