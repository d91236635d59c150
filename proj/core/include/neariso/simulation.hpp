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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neariso/signal.hpp"

namespace neariso {

enum class Generator { sigmoid, cubic };

enum class EstimatorKind { neariso, nearisobc, fused, po };

Generator parse_generator(const std::string& name);
EstimatorKind parse_estimator(const std::string& name);
std::string to_string(EstimatorKind kind);

/// Monotone base shapes on [0, 1): e^{16x-8}/(1+e^{16x-8}) and (2x-1)^3 + 1.
double base_function(Generator generator, double x);

/// f^(m)(x) = f(m x - (j - 1)) on [(j-1)/m, j/m).
double piecewise_function(Generator generator, std::size_t m, double x);

/// Noiseless signal on the design x_i = (i - 1) / n. n must be divisible by m.
Signal generate_signal(Generator generator, std::size_t m, std::size_t n);

/// The m equal blocks on which generate_signal is monotone.
std::vector<IndexRange> true_partition(std::size_t m, std::size_t n);

/// N(0, sigma^2) draws for replication `rep` of size `n`, from a stream keyed
/// by (seed, n, rep) only.
std::vector<double> gaussian_noise(std::uint64_t seed, std::size_t n,
                                   std::size_t rep, double sigma);

struct ExperimentSpec {
  Generator generator = Generator::sigmoid;
  std::size_t m = 2;
  std::vector<std::size_t> n_list = {64, 128, 256, 512, 1024};
  double sigma = 0.25;
  std::size_t reps = 500;
  std::uint64_t seed = 20260101;
  std::vector<EstimatorKind> estimators = {
      EstimatorKind::neariso, EstimatorKind::nearisobc, EstimatorKind::fused,
      EstimatorKind::po};
  std::optional<std::filesystem::path> checkpoint_dir;
  std::size_t threads = 0;  // 0: hardware concurrency
};

void validate(const ExperimentSpec& spec);

struct RiskRow {
  std::string estimator;
  std::size_t n = 0;
  double mse_mean = 0.0;
  double mse_se = 0.0;
};

struct SlopeFit {
  std::string estimator;
  double slope = 0.0;
  double slope_se = 0.0;
  double intercept = 0.0;
};

struct RiskTable {
  std::vector<RiskRow> rows;
  std::vector<SlopeFit> slopes;

  /// Throws std::out_of_range when the (estimator, n) row is missing.
  const RiskRow& row(const std::string& estimator, std::size_t n) const;
  const SlopeFit& slope(const std::string& estimator) const;
};

/// Ordinary least squares of log(mse) on log(n).
SlopeFit fit_loglog_slope(std::span<const double> ns,
                          std::span<const double> mses);

/// Fills the slopes of `table` from its rows.
void fit_slopes(RiskTable& table);

void write_csv(std::ostream& out, const RiskTable& table);
void write_slope_json(std::ostream& out, const RiskTable& table);

// Individual estimators used by the experiment; sigma is the known noise sd.
std::vector<double> estimate_neariso(std::span<const double> y, double sigma);
std::vector<double> estimate_nearisobc(std::span<const double> y, double sigma);
std::vector<double> estimate_fused(std::span<const double> y, double sigma);
std::vector<double> estimate_partition_oracle(
    std::span<const double> y, std::span<const IndexRange> partition);

/// The mu grid for NearisoBC: 20 log-spaced values on
/// [1e-3, 1] * sigma * sqrt(2 log n).
std::vector<double> boundary_mu_grid(std::size_t n, double sigma);

/// The fused-lasso lambda grid: 50 log-spaced values on [1e-3, n] * sigma.
std::vector<double> fused_lambda_grid(std::size_t n, double sigma);

std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Monte Carlo risk of each estimator over spec.n_list.
RiskTable run_experiment(const ExperimentSpec& spec);

/// 0-based positions i with theta_i - theta_{i+1} > min_drop.
std::vector<std::size_t> changepoints(std::span<const double> theta_hat,
                                      double min_drop);

/// Fits the unit-weight nearly-isotonic path at lambda and returns its
/// downward jumps larger than min_drop.
std::vector<std::size_t> detect_changepoints(std::span<const double> y,
                                             double lambda, double min_drop);

}  // namespace neariso
