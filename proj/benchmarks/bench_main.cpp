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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "neariso/graph.hpp"
#include "neariso/maxflow.hpp"
#include "neariso/path.hpp"
#include "neariso/prox.hpp"
#include "neariso/simulation.hpp"

namespace {

using namespace neariso;

std::vector<double> noisy_sigmoid(std::size_t n) {
  auto y = generate_signal(Generator::sigmoid, 2, n).values;
  const auto noise = gaussian_noise(1, n, 0, 0.25);
  for (std::size_t i = 0; i < n; ++i) y[i] += noise[i];
  return y;
}

void BM_SolvePath(benchmark::State& state) {
  const auto y = noisy_sigmoid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_path(y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolvePath)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_ProxChain(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto y = noisy_sigmoid(n);
  const auto g = build_chain(n);
  ProxOptions options;
  options.certify = false;
  for (auto _ : state) benchmark::DoNotOptimize(prox(g, y, 0.5, options));
}
BENCHMARK(BM_ProxChain)->RangeMultiplier(4)->Range(64, 1024);

void BM_ProxGrid(benchmark::State& state) {
  const std::size_t side = static_cast<std::size_t>(state.range(0));
  const auto g = build_grid2d(side, side);
  const auto y = gaussian_noise(2, side * side, 0, 1.0);
  ProxOptions options;
  options.certify = false;
  for (auto _ : state) benchmark::DoNotOptimize(prox(g, y, 0.3, options));
}
BENCHMARK(BM_ProxGrid)->Arg(16)->Arg(32)->Arg(64);

void BM_MaxFlowRandom(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FlowNetwork net(n, 0, n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < 8; ++d) {
      const std::size_t j = static_cast<std::size_t>(u(rng) * n);
      if (j != i) net.add_arc(i, j, u(rng));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(max_flow_min_cut(net));
}
BENCHMARK(BM_MaxFlowRandom)->RangeMultiplier(4)->Range(256, 16384);

}  // namespace

BENCHMARK_MAIN();
