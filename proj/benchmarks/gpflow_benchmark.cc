// Copyright 2026 The gpflow Authors.
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

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "gpflow/driver.h"
#include "gpflow/embed.h"
#include "gpflow/latprecond.h"
#include "gpflow/mwsolve.h"
#include "gpflow/oracle.h"

namespace gpflow {
namespace {

GeneratedInstance Rgg(int n, std::uint64_t seed = 1) {
  InstanceParams params;
  params.n = n;
  return GenerateInstance(params, seed);
}

PreconditionerP RandomP(int n, int k, int levels) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> coord(0, std::int64_t{1}
                                                            << levels);
  std::vector<LatticePoint> support(n, LatticePoint(k));
  for (auto& x : support) {
    for (auto& c : x) c = coord(rng);
  }
  return PreconditionerP(std::move(support), k, levels);
}

void BM_PreconditionerApply(benchmark::State& state) {
  const PreconditionerP p = RandomP(static_cast<int>(state.range(0)), 4, 8);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  Vec b(p.cols());
  for (double& x : b) x = normal(rng);
  Vec out(p.rows());
  for (auto _ : state) {
    p.ApplyInto(b, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * p.cols());
}
BENCHMARK(BM_PreconditionerApply)->Arg(64)->Arg(256)->Arg(1024);

void BM_PreconditionerAdjoint(benchmark::State& state) {
  const PreconditionerP p = RandomP(static_cast<int>(state.range(0)), 4, 8);
  Vec y(p.rows(), 1.0);
  Vec out(p.cols());
  for (auto _ : state) {
    p.ApplyAdjointInto(y, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_PreconditionerAdjoint)->Arg(64)->Arg(256)->Arg(1024);

void BM_MwIterations(benchmark::State& state) {
  // A fixed number of MW iterations on a dense l1 game.
  const int rows = static_cast<int>(state.range(0)), cols = 2 * rows;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  Vec a(rows * cols);
  for (double& x : a) x = normal(rng);
  const NormedOperator op =
      NormedOperator::Dense(rows, cols, a, NormTag::L1(), NormTag::L1());
  SaddleProblem problem;
  problem.w_dim = rows;
  problem.z_dim = cols;
  problem.apply_m = [&](std::span<const double> z, std::span<double> g) {
    op.ApplyInto(z, g);
  };
  problem.apply_mt = [&](std::span<const double> w, std::span<double> v) {
    op.ApplyAdjointInto(w, v);
  };
  problem.z_ball = Ball::kLinf;
  problem.width = OpNorm(op, InducedNorm::kInf);
  MwOptions options;
  options.max_iterations = 1000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(MwRun(problem, 1e-6, options).value);
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_MwIterations)->Arg(16)->Arg(128);

void BM_BourgainEmbed(benchmark::State& state) {
  const GeneratedInstance inst = Rgg(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(BourgainEmbed(inst.graph, 1).points.data());
  }
}
BENCHMARK(BM_BourgainEmbed)->Arg(50)->Arg(200);

void BM_ExactMcf(benchmark::State& state) {
  const GeneratedInstance inst = Rgg(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ExactMcf(inst.graph, inst.demands).cost);
  }
}
BENCHMARK(BM_ExactMcf)->Arg(50)->Arg(200);

void BM_SolveMinCost(benchmark::State& state) {
  const GeneratedInstance inst = Rgg(static_cast<int>(state.range(0)));
  PipelineConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        SolveMinCost(inst.graph, inst.demands, config).cost);
  }
}
BENCHMARK(BM_SolveMinCost)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gpflow

BENCHMARK_MAIN();
