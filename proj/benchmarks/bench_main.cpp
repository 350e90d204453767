// Copyright 2026 The splitmove Authors
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

#include <vector>

#include <benchmark/benchmark.h>

#include "splitmove/benchmarks.hpp"
#include "splitmove/gp.hpp"
#include "splitmove/kernel.hpp"
#include "splitmove/mover.hpp"
#include "splitmove/random.hpp"

namespace sm = splitmove;

namespace {

void BM_LimitStateEval(benchmark::State& state, const char* id) {
  const auto ls = sm::make_benchmark(id);
  auto rng = sm::derive_stream(1, 0, 0);
  std::vector<double> x(ls.dim());
  sm::fill_standard_normal(rng, x);
  for (auto _ : state) benchmark::DoNotOptimize(ls.eval(x));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_LimitStateEval, watermark, "watermark");
BENCHMARK_CAPTURE(BM_LimitStateEval, oscillator15, "oscillator15");
BENCHMARK_CAPTURE(BM_LimitStateEval, concave50, "concave50");

void BM_Transition(benchmark::State& state) {
  const auto ls = sm::make_watermark(20, 0.95);
  sm::KernelConfig cfg;
  cfg.kind = state.range(0) == 0 ? sm::KernelKind::kDirectGaussian : sm::KernelKind::kMetropolisHastings;
  auto rng = sm::derive_stream(2, 0, 0);
  sm::Point p{std::vector<double>(20, 0.1), 0.0};
  p.x[0] = 3.0;
  p.level = ls.level(p.x);
  for (auto _ : state) benchmark::DoNotOptimize(sm::transition(p, 0.5, cfg, ls, rng).calls);
  state.SetItemsProcessed(state.iterations() * cfg.burn_in);
}
BENCHMARK(BM_Transition)->Arg(0)->Arg(1);

void BM_IdealDescent(benchmark::State& state) {
  const auto h = *sm::toy_ideal_state(sm::ToyKind::kExponential1).hazard();
  auto rng = sm::derive_stream(3, 0, 0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const auto log = sm::ideal_descend(h, n, sm::StopRule::at_level(13.8155), rng);
    benchmark::DoNotOptimize(log.total_moves);
  }
}
BENCHMARK(BM_IdealDescent)->Arg(10)->Arg(100)->Arg(1000);

void BM_McmcDescentWatermark(benchmark::State& state) {
  const auto ls = sm::make_watermark(20, 0.95);
  auto rng = sm::derive_stream(4, 0, 0);
  for (auto _ : state) {
    const auto log = sm::descend_population(100, ls, sm::StopRule::at_level(0.95), {}, rng);
    benchmark::DoNotOptimize(log.total_moves);
  }
}
BENCHMARK(BM_McmcDescentWatermark)->Unit(benchmark::kMillisecond);

void BM_GpFit(benchmark::State& state) {
  const auto n = state.range(0), d = state.range(1);
  auto rng = sm::derive_stream(5, 0, 0);
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0;
    for (Eigen::Index k = 0; k < d; ++k) {
      x(i, k) = 4 * sm::uniform01(rng) - 2;
      s += x(i, k) * x(i, k);
    }
    y(i) = std::sqrt(s);
  }
  sm::GpFitOptions o;
  o.restarts = static_cast<int>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(sm::GPModel::fit(x, y, 3.0, o).log_likelihood());
}
BENCHMARK(BM_GpFit)->Args({20, 2, 8})->Args({60, 8, 8})->Args({120, 20, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
