#include <benchmark/benchmark.h>

#include "wekac/functions.hpp"
#include "wekac/moments.hpp"
#include "wekac/sieve.hpp"
#include "wekac/tau.hpp"

using namespace wekac;

static void BM_BuildSieve(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_sieve(limit).limit());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildSieve)->Arg(1 << 20)->Arg(10000000)->Unit(benchmark::kMillisecond);

static void BM_MomentScan(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  const SieveTable table(x);
  const auto w = catalog::divisor_k(2);
  const auto f = catalog::omega();
  ExecContext ctx;
  ctx.workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(weighted_moments(w, f, x, {1, 2, 3, 4, 5, 6}, table, ctx));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MomentScan)->Args({1000000, 1})->Args({1000000, 4})->Args({10000000, 1})->Unit(benchmark::kMillisecond);

static void BM_Cdf(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  const SieveTable table(x);
  std::vector<double> grid;
  for (double v = -3; v <= 3; v += 0.25) grid.push_back(v);
  for (auto _ : state)
    benchmark::DoNotOptimize(empirical_cdf(catalog::one(), catalog::omega(), x, grid, table).ks_distance);
}
BENCHMARK(BM_Cdf)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_TauSeries(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tau_series(limit).back());
}
BENCHMARK(BM_TauSeries)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
