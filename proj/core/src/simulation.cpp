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

#include "neariso/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "neariso/error.hpp"
#include "neariso/parallel.hpp"
#include "neariso/path.hpp"
#include "neariso/prox.hpp"
#include "neariso/tuning.hpp"

namespace neariso {

Generator parse_generator(const std::string& name) {
  if (name == "sigmoid") return Generator::sigmoid;
  if (name == "cubic") return Generator::cubic;
  throw InvalidArgument("unknown generator '" + name +
                        "' (expected sigmoid or cubic)");
}

EstimatorKind parse_estimator(const std::string& name) {
  if (name == "neariso") return EstimatorKind::neariso;
  if (name == "nearisobc") return EstimatorKind::nearisobc;
  if (name == "fused") return EstimatorKind::fused;
  if (name == "po") return EstimatorKind::po;
  throw InvalidArgument("unknown estimator '" + name +
                        "' (expected neariso, nearisobc, fused or po)");
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::neariso: return "neariso";
    case EstimatorKind::nearisobc: return "nearisobc";
    case EstimatorKind::fused: return "fused";
    case EstimatorKind::po: return "po";
  }
  return "?";
}

double base_function(Generator generator, double x) {
  if (generator == Generator::sigmoid) {
    return 1.0 / (1.0 + std::exp(-(16.0 * x - 8.0)));
  }
  const double u = 2.0 * x - 1.0;
  return u * u * u + 1.0;
}

double piecewise_function(Generator generator, std::size_t m, double x) {
  if (m == 0) throw InvalidArgument("m must be >= 1");
  const double scaled = static_cast<double>(m) * x;
  const double piece = std::clamp(std::floor(scaled), 0.0,
                                  static_cast<double>(m - 1));
  return base_function(generator, scaled - piece);
}

Signal generate_signal(Generator generator, std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw InvalidArgument("m and n must be >= 1");
  if (n % m != 0) {
    throw InvalidArgument("n = " + std::to_string(n) +
                          " is not divisible by m = " + std::to_string(m));
  }
  Signal s;
  s.values.resize(n);
  s.design.emplace(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Block j is exactly [j n/m, (j+1) n/m); index arithmetic avoids rounding
    // at the block edges.
    const std::size_t block = i * m / n;
    const double local =
        static_cast<double>(i * m - block * n) / static_cast<double>(n);
    (*s.design)[i] = static_cast<double>(i) / static_cast<double>(n);
    s.values[i] = base_function(generator, local);
  }
  return s;
}

std::vector<IndexRange> true_partition(std::size_t m, std::size_t n) {
  if (m == 0 || n % m != 0) {
    throw InvalidArgument("n must be a positive multiple of m");
  }
  std::vector<IndexRange> parts;
  for (std::size_t j = 0; j < m; ++j) parts.push_back({j * n / m, (j + 1) * n / m});
  return parts;
}

std::vector<double> gaussian_noise(std::uint64_t seed, std::size_t n,
                                   std::size_t rep, double sigma) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n),
                    static_cast<std::uint32_t>(rep)};
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<double> noise(n);
  for (double& v : noise) v = normal(engine);
  return noise;
}

void validate(const ExperimentSpec& spec) {
  if (spec.m == 0) throw InvalidArgument("m must be >= 1");
  if (spec.n_list.empty()) throw InvalidArgument("n_list is empty");
  for (std::size_t n : spec.n_list) {
    if (n < 2 || n % spec.m != 0) {
      throw InvalidArgument("n = " + std::to_string(n) +
                            " must be >= 2 and divisible by m");
    }
  }
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
    throw InvalidArgument("sigma must be positive");
  }
  if (spec.reps == 0) throw InvalidArgument("reps must be >= 1");
  if (spec.estimators.empty()) throw InvalidArgument("no estimators selected");
}

const RiskRow& RiskTable::row(const std::string& estimator,
                              std::size_t n) const {
  for (const auto& r : rows) {
    if (r.estimator == estimator && r.n == n) return r;
  }
  throw std::out_of_range("no row for " + estimator + " at n = " +
                          std::to_string(n));
}

const SlopeFit& RiskTable::slope(const std::string& estimator) const {
  for (const auto& s : slopes) {
    if (s.estimator == estimator) return s;
  }
  throw std::out_of_range("no slope for " + estimator);
}

SlopeFit fit_loglog_slope(std::span<const double> ns,
                          std::span<const double> mses) {
  if (ns.size() != mses.size() || ns.size() < 2) {
    throw InvalidArgument("slope fit needs at least two (n, mse) points");
  }
  const std::size_t k = ns.size();
  std::vector<double> lx(k), ly(k);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(ns[i] > 0.0) || !(mses[i] > 0.0)) {
      throw InvalidArgument("slope fit needs positive n and mse");
    }
    lx[i] = std::log(ns[i]);
    ly[i] = std::log(mses[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("slope fit needs distinct n values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (k > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double r = ly[i] - fit.intercept - fit.slope * lx[i];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / static_cast<double>(k - 2) / sxx);
  }
  return fit;
}

void fit_slopes(RiskTable& table) {
  table.slopes.clear();
  std::vector<std::string> names;
  for (const auto& r : table.rows) {
    if (std::find(names.begin(), names.end(), r.estimator) == names.end()) {
      names.push_back(r.estimator);
    }
  }
  for (const auto& name : names) {
    std::vector<double> ns, mses;
    bool usable = true;
    for (const auto& r : table.rows) {
      if (r.estimator != name) continue;
      ns.push_back(static_cast<double>(r.n));
      mses.push_back(r.mse_mean);
      usable = usable && r.mse_mean > 0.0;
    }
    std::vector<double> distinct = ns;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (!usable || distinct.size() < 2) continue;
    SlopeFit fit = fit_loglog_slope(ns, mses);
    fit.estimator = name;
    table.slopes.push_back(fit);
  }
}

void write_csv(std::ostream& out, const RiskTable& table) {
  const auto old = out.precision(17);
  out << "estimator,n,mse_mean,mse_se\n";
  for (const auto& r : table.rows) {
    out << r.estimator << ',' << r.n << ',' << r.mse_mean << ',' << r.mse_se
        << '\n';
  }
  out.precision(old);
}

void write_slope_json(std::ostream& out, const RiskTable& table) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& s : table.slopes) {
    doc.push_back({{"estimator", s.estimator},
                   {"slope", s.slope},
                   {"slope_se", s.slope_se},
                   {"intercept", s.intercept}});
  }
  out << doc.dump(2) << '\n';
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw InvalidArgument("log grid needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = std::exp(a + (b - a) * static_cast<double>(i) /
                               static_cast<double>(count - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> boundary_mu_grid(std::size_t n, double sigma) {
  const double scale =
      sigma * std::sqrt(2.0 * std::log(static_cast<double>(std::max<std::size_t>(n, 2))));
  auto grid = log_grid(1e-3, 1.0, 20);
  for (double& v : grid) v *= scale;
  return grid;
}

std::vector<double> fused_lambda_grid(std::size_t n, double sigma) {
  return log_grid(1e-3 * sigma, static_cast<double>(n) * sigma, 50);
}

std::vector<double> estimate_neariso(std::span<const double> y, double sigma) {
  const SolutionPath path = solve_path(y);
  const TuningReport report = sure_along_path(path, y, sigma);
  return path.evaluate(report.best().lambda);
}

std::vector<double> estimate_nearisobc(std::span<const double> y,
                                       double sigma) {
  const TuningReport report =
      select_boundary_corrected(y, sigma, boundary_mu_grid(y.size(), sigma));
  const auto& best = report.best();
  return boundary_corrected_fit(y, best.lambda, best.mu.value_or(0.0));
}

std::vector<double> estimate_fused(std::span<const double> y, double sigma) {
  TuningGrid grid;
  grid.lambdas = fused_lambda_grid(y.size(), sigma);
  const TuningReport report =
      select_by_sure(y, sigma, SureEstimator::fused, grid);
  return fused_lasso(y, report.best().lambda);
}

std::vector<double> estimate_partition_oracle(
    std::span<const double> y, std::span<const IndexRange> partition) {
  std::vector<double> fit;
  fit.reserve(y.size());
  std::size_t expected = 0;
  for (const IndexRange& r : partition) {
    if (r.begin != expected || r.end > y.size() || r.end <= r.begin) {
      throw InvalidArgument("partition does not tile the signal");
    }
    const auto part = isotonic(y.subspan(r.begin, r.size()));
    fit.insert(fit.end(), part.begin(), part.end());
    expected = r.end;
  }
  if (expected != y.size()) {
    throw InvalidArgument("partition does not tile the signal");
  }
  return fit;
}

namespace {

std::string checkpoint_tag(const ExperimentSpec& spec, EstimatorKind kind,
                           std::size_t n) {
  std::ostringstream tag;
  tag.precision(17);
  tag << "# estimator=" << to_string(kind)
      << " generator=" << (spec.generator == Generator::sigmoid ? "sigmoid" : "cubic")
      << " m=" << spec.m << " n=" << n << " sigma=" << spec.sigma
      << " reps=" << spec.reps << " seed=" << spec.seed;
  return tag.str();
}

std::filesystem::path checkpoint_file(const ExperimentSpec& spec,
                                      EstimatorKind kind, std::size_t n) {
  return *spec.checkpoint_dir /
         (to_string(kind) + "_n" + std::to_string(n) + ".csv");
}

// Per-replication losses from a finished checkpoint, or nothing when the file
// is missing, incomplete or was written for a different experiment.
std::optional<std::vector<double>> load_checkpoint(const ExperimentSpec& spec,
                                                   EstimatorKind kind,
                                                   std::size_t n) {
  std::ifstream in(checkpoint_file(spec, kind, n));
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line) || line != checkpoint_tag(spec, kind, n)) {
    return std::nullopt;
  }
  std::vector<double> losses;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      losses.push_back(std::stod(line));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (losses.size() != spec.reps) return std::nullopt;
  return losses;
}

void save_checkpoint(const ExperimentSpec& spec, EstimatorKind kind,
                     std::size_t n, const std::vector<double>& losses) {
  std::filesystem::create_directories(*spec.checkpoint_dir);
  const auto target = checkpoint_file(spec, kind, n);
  auto partial = target;
  partial += ".tmp";
  {
    std::ofstream out(partial);
    out.precision(17);
    out << checkpoint_tag(spec, kind, n) << '\n';
    for (double v : losses) out << v << '\n';
    if (!out) throw std::runtime_error("cannot write checkpoint " + partial.string());
  }
  std::filesystem::rename(partial, target);
}

}  // namespace

RiskTable run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const std::size_t kinds = spec.estimators.size();
  // losses[e][n index][rep]
  std::vector<std::vector<std::vector<double>>> losses(
      kinds, std::vector<std::vector<double>>(spec.n_list.size()));

  for (std::size_t ni = 0; ni < spec.n_list.size(); ++ni) {
    const std::size_t n = spec.n_list[ni];
    std::vector<std::size_t> pending;
    for (std::size_t e = 0; e < kinds; ++e) {
      std::optional<std::vector<double>> cached;
      if (spec.checkpoint_dir) cached = load_checkpoint(spec, spec.estimators[e], n);
      if (cached) {
        losses[e][ni] = std::move(*cached);
      } else {
        losses[e][ni].assign(spec.reps, 0.0);
        pending.push_back(e);
      }
    }
    if (pending.empty()) continue;

    const Signal truth = generate_signal(spec.generator, spec.m, n);
    const auto partition = true_partition(spec.m, n);
    parallel_for(spec.reps, spec.threads, [&](std::size_t rep) {
      std::vector<double> y = gaussian_noise(spec.seed, n, rep, spec.sigma);
      for (std::size_t i = 0; i < n; ++i) y[i] += truth.values[i];
      for (std::size_t e : pending) {
        std::vector<double> fit;
        switch (spec.estimators[e]) {
          case EstimatorKind::neariso: fit = estimate_neariso(y, spec.sigma); break;
          case EstimatorKind::nearisobc: fit = estimate_nearisobc(y, spec.sigma); break;
          case EstimatorKind::fused: fit = estimate_fused(y, spec.sigma); break;
          case EstimatorKind::po: fit = estimate_partition_oracle(y, partition); break;
        }
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = fit[i] - truth.values[i];
          loss += d * d;
        }
        losses[e][ni][rep] = loss / static_cast<double>(n);
      }
    });
    if (spec.checkpoint_dir) {
      for (std::size_t e : pending) {
        save_checkpoint(spec, spec.estimators[e], n, losses[e][ni]);
      }
    }
  }

  RiskTable table;
  for (std::size_t e = 0; e < kinds; ++e) {
    for (std::size_t ni = 0; ni < spec.n_list.size(); ++ni) {
      const auto& l = losses[e][ni];
      const double reps = static_cast<double>(l.size());
      double mean = 0.0;
      for (double v : l) mean += v;
      mean /= reps;
      double ss = 0.0;
      for (double v : l) ss += (v - mean) * (v - mean);
      const double se = l.size() > 1 ? std::sqrt(ss / (reps - 1.0) / reps) : 0.0;
      table.rows.push_back({to_string(spec.estimators[e]), spec.n_list[ni], mean, se});
    }
  }
  fit_slopes(table);
  return table;
}

std::vector<std::size_t> changepoints(std::span<const double> theta_hat,
                                      double min_drop) {
  if (!(min_drop >= 0.0)) throw InvalidArgument("min_drop must be >= 0");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < theta_hat.size(); ++i) {
    if (theta_hat[i] - theta_hat[i + 1] > min_drop) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> detect_changepoints(std::span<const double> y,
                                             double lambda, double min_drop) {
  return changepoints(solve_path(y).evaluate(lambda), min_drop);
}

}  // namespace neariso
