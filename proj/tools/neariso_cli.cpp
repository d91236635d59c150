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

// Command-line front end: fitting, paths, tuning, changepoints, model
// selection and the Monte Carlo risk experiments.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "neariso/csv.hpp"
#include "neariso/error.hpp"
#include "neariso/graph.hpp"
#include "neariso/grid2d.hpp"
#include "neariso/kkt.hpp"
#include "neariso/model_select.hpp"
#include "neariso/path.hpp"
#include "neariso/prox.hpp"
#include "neariso/robust.hpp"
#include "neariso/simulation.hpp"
#include "neariso/summary.hpp"
#include "neariso/tuning.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace neariso;

struct InputArgs {
  std::string input = "-";
  std::string column = "0";
  std::string time_column;
  bool keep_missing = false;

  void attach(CLI::App* app) {
    app->add_option("-i,--input", input, "CSV file, or - for stdin")
        ->capture_default_str();
    app->add_option("--column", column, "Value column: header name or 0-based index")
        ->capture_default_str();
    app->add_option("--time-column", time_column,
                    "Design column (header name or index); row order when omitted");
    app->add_flag("--keep-missing", keep_missing,
                  "Fail on missing records instead of dropping them");
  }

  static ColumnRef column_ref(const std::string& text) {
    if (!text.empty() &&
        text.find_first_not_of("0123456789") == std::string::npos) {
      return ColumnRef::by_index(std::stoul(text));
    }
    return ColumnRef::by_name(text);
  }

  Signal read() const {
    CsvOptions options;
    options.value_column = column_ref(column);
    if (!time_column.empty()) options.time_column = column_ref(time_column);
    options.drop_missing = !keep_missing;
    if (input == "-") return ingest_csv(std::cin, options);
    return ingest_csv(std::filesystem::path(input), options);
  }
};

struct OutputArgs {
  std::string out;
  std::string summary;

  void attach(CLI::App* app) {
    app->add_option("-o,--out", out, "CSV output file (stdout when omitted)");
    app->add_option("--summary", summary,
                    "JSON summary file (printed after the CSV when omitted)");
  }

  template <class WriteCsv>
  void emit(WriteCsv&& write_csv, const json& doc) const {
    if (out.empty()) {
      std::cout.precision(17);
      write_csv(std::cout);
    } else {
      std::ofstream file(out);
      if (!file) throw InvalidArgument("cannot write " + out);
      file.precision(17);
      write_csv(file);
    }
    if (summary.empty()) {
      std::cout << doc.dump(2) << '\n';
    } else {
      std::ofstream file(summary);
      if (!file) throw InvalidArgument("cannot write " + summary);
      file << doc.dump(2) << '\n';
    }
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InvalidArgument("not a number: " + item);
    values.push_back(v);
  }
  return values;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  for (double v : parse_list(text)) {
    if (!(v >= 1.0) || v != std::floor(v)) {
      throw InvalidArgument("expected positive integers: " + text);
    }
    sizes.push_back(static_cast<std::size_t>(v));
  }
  return sizes;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) names.push_back(item);
  }
  return names;
}

json report_json(const TuningReport& report, const std::string& method) {
  const auto& best = report.best();
  json doc{{"method", method},
           {"candidates", report.candidates.size()},
           {"lambda", best.lambda},
           {"criterion", best.criterion},
           {"df", best.df}};
  if (best.mu) doc["mu"] = *best.mu;
  return doc;
}

void write_fit_csv(std::ostream& out, const Signal& signal,
                   const std::vector<double>& fit) {
  out << "index,time,value,fit\n";
  for (std::size_t i = 0; i < fit.size(); ++i) {
    out << i + 1 << ',' << (*signal.design)[i] << ',' << signal.values[i]
        << ',' << fit[i] << '\n';
  }
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  InputArgs input;
  OutputArgs output;
  std::string matrix;
  std::vector<std::string> graph{"chain"};
  double lambda = 0.0;
  std::optional<double> mu;
  std::string loss = "squared";
  std::size_t max_iter = 5000;
};

void run_fit(const FitArgs& args) {
  const SmoothLoss loss = parse_loss(args.loss);
  const std::string& kind = args.graph.at(0);

  Signal signal;
  std::optional<Matrix> matrix;
  if (!args.matrix.empty()) {
    std::ifstream in(args.matrix);
    if (!in) throw InvalidArgument("cannot open " + args.matrix);
    matrix = read_matrix_csv(in);
    signal = make_signal(matrix->data);
  } else {
    signal = args.input.read();
  }
  if (!signal.design) {
    std::vector<double> rows(signal.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<double>(i);
    signal.design = std::move(rows);
  }
  const std::size_t n = signal.size();

  WeightedDigraph graph;
  if (kind == "chain") {
    graph = build_chain(n);
  } else if (kind == "symmetric") {
    graph = build_symmetric_chain(n);
  } else if (kind == "grid") {
    std::size_t rows = 0, cols = 0;
    if (args.graph.size() == 3) {
      rows = std::stoul(args.graph[1]);
      cols = std::stoul(args.graph[2]);
    } else if (matrix && args.graph.size() == 1) {
      rows = matrix->rows;
      cols = matrix->cols;
    } else {
      throw InvalidArgument("--graph grid needs R C (or --matrix input)");
    }
    if (rows * cols != n) {
      throw InvalidArgument("grid " + std::to_string(rows) + "x" +
                            std::to_string(cols) + " does not match " +
                            std::to_string(n) + " observations");
    }
    graph = build_grid2d(rows, cols);
  } else if (kind == "edge-list") {
    if (args.graph.size() != 2) throw InvalidArgument("--graph edge-list needs FILE");
    std::ifstream in(args.graph[1]);
    if (!in) throw InvalidArgument("cannot open " + args.graph[1]);
    graph = read_edge_list(in, n);
    if (graph.num_nodes() != n) {
      throw InvalidArgument("edge list refers to nodes beyond the signal length");
    }
  } else {
    throw InvalidArgument("unknown graph '" + kind +
                          "' (chain, symmetric, grid R C, edge-list FILE)");
  }
  if (args.mu && kind != "chain") {
    throw InvalidArgument("--mu (boundary correction) needs --graph chain");
  }
  if (args.mu && loss.kind != SmoothLoss::Kind::squared) {
    throw InvalidArgument("--mu is only available with the squared loss");
  }

  FitResult result;
  std::string solver;
  if (loss.kind == SmoothLoss::Kind::squared) {
    const std::vector<double>& y = signal.values;
    if (kind == "chain") {
      solver = "path";
      result.theta = args.mu ? boundary_corrected_fit(y, args.lambda, *args.mu)
                             : solve_path(y).evaluate(args.lambda);
      // The certificate is for the objective actually solved.
      const auto target = boundary_shift(y, args.mu.value_or(0.0));
      std::vector<double> r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = target[i] - result.theta[i];
      result.kkt_residual = kkt_residual(graph, r, result.theta, args.lambda);
    } else {
      solver = "prox";
      const ProxResult prox_result = prox(graph, y, args.lambda);
      result.theta = prox_result.theta_hat;
      result.kkt_residual = prox_result.kkt_residual;
    }
    result.lambda = args.lambda;
    result.mu = args.mu.value_or(0.0);
    result.objective = loss_value(loss, result.theta, y) +
                       args.lambda * penalty(graph, result.theta);
    if (args.mu && n >= 2) {
      result.objective += *args.mu * (result.theta.back() - result.theta.front());
    }
    result.df = static_cast<double>(constant_components(graph, result.theta));
  } else {
    solver = "fista";
    SolverConfig config;
    config.max_iter = args.max_iter;
    result = fista_fit(graph, signal.values, args.lambda, loss, config);
  }

  json doc{{"n", n},
           {"graph", kind},
           {"solver", solver},
           {"loss", args.loss},
           {"lambda", result.lambda},
           {"objective", result.objective},
           {"df", result.df},
           {"kkt_residual", result.kkt_residual}};
  if (args.mu) doc["mu"] = *args.mu;
  if (solver == "fista") {
    doc["iterations"] = result.iterations;
    doc["converged"] = result.converged;
  }
  args.output.emit(
      [&](std::ostream& out) {
        if (matrix) {
          Matrix fit(matrix->rows, matrix->cols);
          fit.data = result.theta;
          write_matrix_csv(out, fit);
        } else {
          write_fit_csv(out, signal, result.theta);
        }
      },
      doc);
}

// ---------------------------------------------------------------- path

struct PathArgs {
  InputArgs input;
  OutputArgs output;
  bool design_weights = false;
  bool force = false;
};

void run_path(const PathArgs& args) {
  const Signal signal = args.input.read();
  std::vector<double> weights;
  if (args.design_weights) weights = design_weights(*signal.design);
  PathOptions options;
  options.force = args.force;
  const SolutionPath path = solve_path(signal.values, weights, options);
  const auto bps = path.breakpoints();

  json doc{{"n", signal.size()},
           {"breakpoints", bps.size()},
           {"terminal_lambda", path.terminal_lambda()},
           {"heuristic", path.heuristic()}};
  args.output.emit(
      [&](std::ostream& out) {
        out << "step,lambda,groups,lower_variation\n";
        for (std::size_t i = 0; i < bps.size(); ++i) {
          const auto fit = path.evaluate(bps[i]);
          out << i << ',' << bps[i] << ',' << path.state_at(bps[i]).size() << ','
              << weighted_lower_variation(fit, path.weights()) << '\n';
        }
      },
      doc);
}

// ---------------------------------------------------------------- tune

struct TuneArgs {
  InputArgs input;
  OutputArgs output;
  std::string method = "sure";
  std::string estimator = "neariso";
  std::optional<double> sigma;
  std::size_t folds = 5;
  std::string lambdas;
  std::string mus;
};

void run_tune(const TuneArgs& args) {
  const Signal signal = args.input.read();
  const auto& y = signal.values;
  std::vector<double> lambdas = parse_list(args.lambdas);
  TuningReport report;
  std::string label = args.method;

  if (args.method == "sure") {
    if (!args.sigma) throw InvalidArgument("--method sure requires --sigma");
    const double sigma = *args.sigma;
    label += ":" + args.estimator;
    if (args.estimator == "neariso") {
      TuningGrid grid = lambdas.empty() ? TuningGrid::path_breakpoints() : TuningGrid{};
      grid.lambdas = lambdas;
      report = select_by_sure(y, sigma, SureEstimator::neariso, grid);
    } else if (args.estimator == "fused") {
      TuningGrid grid;
      grid.lambdas = lambdas.empty() ? fused_lambda_grid(y.size(), sigma) : lambdas;
      report = select_by_sure(y, sigma, SureEstimator::fused, grid);
    } else if (args.estimator == "nearisobc") {
      std::vector<double> mus = parse_list(args.mus);
      if (mus.empty()) mus = boundary_mu_grid(y.size(), sigma);
      report = select_boundary_corrected(y, sigma, mus);
    } else {
      throw InvalidArgument("unknown estimator '" + args.estimator +
                            "' (neariso, nearisobc, fused)");
    }
  } else if (args.method == "cv") {
    if (lambdas.empty()) {
      const double range = value_range(y);
      const double scale = range > 0.0 ? range : 1.0;
      lambdas = log_grid(1e-3 * scale, static_cast<double>(y.size()) * scale, 30);
      lambdas.insert(lambdas.begin(), 0.0);
    }
    report = cross_validate(signal, lambdas, args.folds);
  } else {
    throw InvalidArgument("unknown method '" + args.method + "' (sure, cv)");
  }
  args.output.emit([&](std::ostream& out) { write_csv(out, report); },
                   report_json(report, label));
}

// ---------------------------------------------------------------- changepoints

struct ChangepointArgs {
  InputArgs input;
  OutputArgs output;
  double lambda = 0.0;
  double min_drop = 0.0;
};

void run_changepoints(const ChangepointArgs& args) {
  const Signal signal = args.input.read();
  const auto fit = solve_path(signal.values).evaluate(args.lambda);
  const auto drops = changepoints(fit, args.min_drop);
  json doc{{"n", signal.size()},
           {"lambda", args.lambda},
           {"min_drop", args.min_drop},
           {"changepoints", drops.size()}};
  args.output.emit(
      [&](std::ostream& out) {
        out << "index,time,drop\n";
        for (std::size_t i : drops) {
          out << i + 1 << ',' << (*signal.design)[i] << ',' << fit[i] - fit[i + 1]
              << '\n';
        }
      },
      doc);
}

// ---------------------------------------------------------------- modelselect

struct ModelSelectArgs {
  InputArgs input;
  OutputArgs output;
  double sigma = 0.0;
  ModelSelectOptions options;
  bool no_sieve = false;
};

void run_modelselect(const ModelSelectArgs& args) {
  const Signal signal = args.input.read();
  ModelSelectOptions options = args.options;
  options.sieve = !args.no_sieve;
  const ModelSelectResult result = model_select(signal.values, args.sigma, options);

  json pieces = json::array();
  for (std::size_t p = 0; p < result.choice.pieces.size(); ++p) {
    json piece{{"begin", result.choice.pieces[p].begin + 1},
               {"end", result.choice.pieces[p].end}};
    if (options.sieve) {
      piece["sieve_index"] = result.choice.sieve_index[p];
      piece["budget"] = result.choice.budgets[p];
    }
    pieces.push_back(piece);
  }
  json doc{{"n", signal.size()},
           {"sigma", args.sigma},
           {"c_pen", options.c_pen},
           {"sieve", options.sieve},
           {"objective", result.objective},
           {"pieces", pieces}};
  args.output.emit(
      [&](std::ostream& out) { write_fit_csv(out, signal, result.fitted); }, doc);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  OutputArgs output;
  std::string generator = "sigmoid";
  std::size_t m = 2;
  std::string n_list = "64,128,256,512,1024";
  double sigma = 0.25;
  std::size_t reps = 500;
  std::uint64_t seed = 20260101;
  std::string estimators = "neariso,nearisobc,fused,po";
  std::string checkpoint_dir;
  std::size_t threads = 0;
};

json slopes_json(const RiskTable& table) {
  json slopes = json::array();
  for (const auto& s : table.slopes) {
    slopes.push_back({{"estimator", s.estimator},
                      {"slope", s.slope},
                      {"slope_se", s.slope_se},
                      {"intercept", s.intercept}});
  }
  return slopes;
}

void run_simulate(const SimulateArgs& args) {
  ExperimentSpec spec;
  spec.generator = parse_generator(args.generator);
  spec.m = args.m;
  spec.n_list = parse_sizes(args.n_list);
  spec.sigma = args.sigma;
  spec.reps = args.reps;
  spec.seed = args.seed;
  spec.estimators.clear();
  for (const auto& name : split_names(args.estimators)) {
    spec.estimators.push_back(parse_estimator(name));
  }
  if (!args.checkpoint_dir.empty()) spec.checkpoint_dir = args.checkpoint_dir;
  spec.threads = args.threads;
  const RiskTable table = run_experiment(spec);
  json doc{{"generator", args.generator},
           {"m", spec.m},
           {"sigma", spec.sigma},
           {"reps", spec.reps},
           {"seed", spec.seed},
           {"slopes", slopes_json(table)}};
  args.output.emit([&](std::ostream& out) { write_csv(out, table); }, doc);
}

struct Simulate2dArgs {
  OutputArgs output;
  std::string kind = "cubic2d";
  GridExperimentSpec spec;
  std::string k_list = "8,16";
};

void run_simulate2d(const Simulate2dArgs& args) {
  GridExperimentSpec spec = args.spec;
  spec.kind = parse_block_kind(args.kind);
  spec.k_list = parse_sizes(args.k_list);
  const RiskTable table = run_grid_experiment(spec);
  json doc{{"kind", args.kind},
           {"m", spec.m},
           {"sigma", spec.sigma},
           {"reps", spec.reps},
           {"seed", spec.seed},
           {"slopes", slopes_json(table)}};
  args.output.emit([&](std::ostream& out) { write_csv(out, table); }, doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nearly-isotonic regression: fits, paths, tuning and risk experiments"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit at a fixed lambda on a chain or graph");
  fit.input.attach(fit_cmd);
  fit.output.attach(fit_cmd);
  fit_cmd->add_option("--matrix", fit.matrix, "Matrix CSV input (row-major grid)");
  fit_cmd->add_option("--graph", fit.graph,
                      "chain | symmetric | grid R C | edge-list FILE")
      ->expected(1, 3)
      ->capture_default_str();
  fit_cmd->add_option("--lambda", fit.lambda, "Penalty level")->required();
  fit_cmd->add_option("--mu", fit.mu, "Boundary correction (chain, squared loss)");
  fit_cmd->add_option("--loss", fit.loss, "squared | huber[:DELTA]")
      ->capture_default_str();
  fit_cmd->add_option("--max-iter", fit.max_iter, "FISTA iteration cap")
      ->capture_default_str();
  fit_cmd->callback([&] { run_fit(fit); });

  PathArgs path;
  auto* path_cmd = app.add_subcommand("path", "Breakpoints of the exact solution path");
  path.input.attach(path_cmd);
  path.output.attach(path_cmd);
  path_cmd->add_flag("--design-weights", path.design_weights,
                     "Edge weights 1/(x_{i+1} - x_i) from the time column");
  path_cmd->add_flag("--force", path.force,
                     "Run even when the weights fail validation (heuristic path)");
  path_cmd->callback([&] { run_path(path); });

  TuneArgs tune;
  auto* tune_cmd = app.add_subcommand("tune", "Select lambda by SURE or cross-validation");
  tune.input.attach(tune_cmd);
  tune.output.attach(tune_cmd);
  tune_cmd->add_option("--method", tune.method, "sure | cv")->capture_default_str();
  tune_cmd->add_option("--estimator", tune.estimator, "neariso | nearisobc | fused (sure)")
      ->capture_default_str();
  tune_cmd->add_option("--sigma", tune.sigma, "Noise level (required for sure)");
  tune_cmd->add_option("--folds", tune.folds, "Cross-validation folds")
      ->capture_default_str();
  tune_cmd->add_option("--lambdas", tune.lambdas, "Comma-separated lambda grid");
  tune_cmd->add_option("--mus", tune.mus, "Comma-separated mu grid (nearisobc)");
  tune_cmd->callback([&] { run_tune(tune); });

  ChangepointArgs cps;
  auto* cp_cmd = app.add_subcommand("changepoints", "Downward jumps of the fit");
  cps.input.attach(cp_cmd);
  cps.output.attach(cp_cmd);
  cp_cmd->add_option("--lambda", cps.lambda, "Penalty level")->required();
  cp_cmd->add_option("--min-drop", cps.min_drop, "Smallest reported drop")
      ->capture_default_str();
  cp_cmd->callback([&] { run_changepoints(cps); });

  ModelSelectArgs ms;
  auto* ms_cmd = app.add_subcommand("modelselect",
                                    "Exhaustive penalized partition selection (small n)");
  ms.input.attach(ms_cmd);
  ms.output.attach(ms_cmd);
  ms_cmd->add_option("--sigma", ms.sigma, "Noise level")->required();
  ms_cmd->add_option("--cpen", ms.options.c_pen, "Penalty constant")
      ->capture_default_str();
  ms_cmd->add_option("--n-cap", ms.options.n_cap, "Largest accepted n")
      ->capture_default_str();
  ms_cmd->add_flag("--no-sieve", ms.no_sieve, "Unbounded budgets");
  ms_cmd->callback([&] { run_modelselect(ms); });

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo risk experiment in 1-D");
  sim.output.attach(sim_cmd);
  sim_cmd->add_option("--generator", sim.generator, "sigmoid | cubic")
      ->capture_default_str();
  sim_cmd->add_option("--m", sim.m, "Monotone pieces")->capture_default_str();
  sim_cmd->add_option("--n-list", sim.n_list, "Comma-separated sample sizes")
      ->capture_default_str();
  sim_cmd->add_option("--sigma", sim.sigma, "Noise level")->capture_default_str();
  sim_cmd->add_option("--reps", sim.reps, "Replications")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  sim_cmd->add_option("--estimators", sim.estimators, "Comma-separated subset")
      ->capture_default_str();
  sim_cmd->add_option("--checkpoint-dir", sim.checkpoint_dir,
                      "Resume from and write per-(estimator, n) results");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0: all cores)")
      ->capture_default_str();
  sim_cmd->callback([&] { run_simulate(sim); });

  Simulate2dArgs sim2;
  auto* sim2_cmd = app.add_subcommand("simulate2d", "Risk experiment on block matrices");
  sim2.output.attach(sim2_cmd);
  sim2_cmd->add_option("--kind", sim2.kind, "cubic2d | cubic1d")->capture_default_str();
  sim2_cmd->add_option("--m", sim2.spec.m, "Blocks per axis")->capture_default_str();
  sim2_cmd->add_option("--k-list", sim2.k_list, "Comma-separated block sizes")
      ->capture_default_str();
  sim2_cmd->add_option("--sigma", sim2.spec.sigma, "Noise level")->capture_default_str();
  sim2_cmd->add_option("--reps", sim2.spec.reps, "Replications")->capture_default_str();
  sim2_cmd->add_option("--seed", sim2.spec.seed, "RNG seed")->capture_default_str();
  sim2_cmd->add_option("--max-side", sim2.spec.max_side, "Largest matrix side")
      ->capture_default_str();
  sim2_cmd->add_option("--lambda-grid", sim2.spec.lambda_grid, "SURE grid size")
      ->capture_default_str();
  sim2_cmd->add_option("--threads", sim2.spec.threads, "Worker threads (0: all cores)")
      ->capture_default_str();
  sim2_cmd->callback([&] { run_simulate2d(sim2); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
