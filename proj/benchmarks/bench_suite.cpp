// Micro-benchmarks for the hot paths: IID generation, the MH sampler, and
// the per-batch metric evaluations whose cost dominates a benchmark run.
// Build with -DMCQUAL_BUILD_BENCHMARKS=ON and run ./benchmarks/mcqual-bench.

#include <benchmark/benchmark.h>

#include <cstdint>

#include <Eigen/Dense>

#include "mcqual/catalog.hpp"
#include "mcqual/metrics_basic.hpp"
#include "mcqual/mh_sampler.hpp"
#include "mcqual/mmd.hpp"
#include "mcqual/rng.hpp"
#include "mcqual/sample_batch.hpp"
#include "mcqual/swd.hpp"
#include "mcqual/targets.hpp"

namespace {

using namespace mcqual;

SampleBatch gaussian_batch(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) pts(i, j) = rng.normal();
  }
  return SampleBatch(std::move(pts));
}

TargetPtr normal3d() {
  return find_target("Normal-3D-Uncorrelated", CatalogConfig::defaults());
}

void BM_SampleIid(benchmark::State& state) {
  const TargetPtr t = normal3d();
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const SampleBatch b = t->sample_iid(n, seed++);
    benchmark::DoNotOptimize(b.points().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleIid)->Arg(1000)->Arg(10000);

void BM_MetropolisHastings(benchmark::State& state) {
  const TargetPtr t = normal3d();
  MHConfig cfg;
  cfg.n_steps = static_cast<std::size_t>(state.range(0));
  cfg.proposal_std = 1.4;
  for (auto _ : state) {
    cfg.seed++;
    const SampleBatch b = metropolis_hastings(*t, cfg);
    benchmark::DoNotOptimize(b.points().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MetropolisHastings)->Arg(10000);

void BM_SlicedWasserstein(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SampleBatch x = gaussian_batch(n, 3, 1);
  const SampleBatch y = gaussian_batch(n, 3, 2);
  SwdConfig cfg;
  cfg.L = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sliced_wasserstein(x, y, cfg));
  }
}
BENCHMARK(BM_SlicedWasserstein)
    ->Args({500, 10})
    ->Args({500, 100})
    ->Args({5000, 10})
    ->Args({5000, 100});

void BM_MmdExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SampleBatch x = gaussian_batch(n, 3, 1);
  const SampleBatch y = gaussian_batch(n, 3, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmd_exact(x, y, 1.0));
  }
}
BENCHMARK(BM_MmdExact)->Arg(250)->Arg(1000)->Arg(2000);

void BM_MmdRff(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SampleBatch x = gaussian_batch(n, 3, 1);
  const SampleBatch y = gaussian_batch(n, 3, 2);
  const int D = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmd_rff(x, y, 1.0, D, 7));
  }
}
BENCHMARK(BM_MmdRff)->Args({1000, 100})->Args({1000, 1000})->Args({5000, 100});

void BM_MedianHeuristic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SampleBatch x = gaussian_batch(n, 3, 1);
  const SampleBatch y = gaussian_batch(n, 3, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(median_heuristic(x, y));
  }
}
BENCHMARK(BM_MedianHeuristic)->Arg(1000)->Arg(5000);

void BM_ChiSquare(benchmark::State& state) {
  const TargetPtr t = normal3d();
  const SampleBatch batch =
      t->sample_iid(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi_square_marginal(batch, *t, 50));
  }
}
BENCHMARK(BM_ChiSquare)->Arg(10000);

void BM_Ess(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  Eigen::MatrixXd pts(n, 1);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) {
    pts(i, 0) = rng.normal();
    w[i] = 0.5 + rng.uniform01();
  }
  const SampleBatch batch(std::move(pts), w);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ess(batch));
  }
}
BENCHMARK(BM_Ess)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
