#include <benchmark/benchmark.h>

#include "logdim/estimators.hpp"
#include "logdim/graphlets.hpp"
#include "logdim/mgeop.hpp"
#include "logdim/spectral.hpp"

using namespace logdim;

namespace {

Graph sample(std::size_t n, std::size_t m) {
  MgeopParams p;
  p.n = n;
  p.m = m;
  p.alpha = 0.6;
  p.beta = 0.2;
  return generate(p, 7).graph;
}

}  // namespace

// range(0) = n, range(1) = m
static void BM_Generate(benchmark::State& state) {
  MgeopParams p;
  p.n = static_cast<std::size_t>(state.range(0));
  p.m = static_cast<std::size_t>(state.range(1));
  p.alpha = 0.6;
  p.beta = 0.2;
  Seed seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate(p, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Args({1000, 2})->Args({20000, 2})->Args({20000, 8})->Args({100000, 4})
    ->Unit(benchmark::kMillisecond);

static void BM_GraphletsExact(benchmark::State& state) {
  const Graph g = sample(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(count_graphlets_exact(g));
  state.counters["edges"] = static_cast<double>(g.edge_count());
}
BENCHMARK(BM_GraphletsExact)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_GraphletsSampled(benchmark::State& state) {
  const Graph g = sample(20000, 3);
  const double q = static_cast<double>(state.range(0)) / 100.0;
  Seed seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(count_graphlets_sampled(g, q, ++seed));
}
BENCHMARK(BM_GraphletsSampled)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_Eigenvalues(benchmark::State& state) {
  const Graph g = sample(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(normalized_laplacian_eigenvalues(g));
}
BENCHMARK(BM_Eigenvalues)->Arg(300)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_DiameterExact(benchmark::State& state) {
  const Graph g = sample(static_cast<std::size_t>(state.range(0)), 3);
  DiameterOptions opt;
  opt.backend = DiameterBackend::exact;
  for (auto _ : state) benchmark::DoNotOptimize(effective_diameter(g, 1, opt));
}
BENCHMARK(BM_DiameterExact)->Arg(2000)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_DiameterSketch(benchmark::State& state) {
  const Graph g = sample(static_cast<std::size_t>(state.range(0)), 3);
  DiameterOptions opt;
  opt.backend = DiameterBackend::sketch;
  for (auto _ : state) benchmark::DoNotOptimize(effective_diameter(g, 1, opt));
}
BENCHMARK(BM_DiameterSketch)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);

static void BM_PowerLawFit(benchmark::State& state) {
  const auto deg = degree_stats(sample(100000, 4)).degrees;
  for (auto _ : state) benchmark::DoNotOptimize(fit_power_law(deg));
}
BENCHMARK(BM_PowerLawFit)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
