#include <benchmark/benchmark.h>

#include "blockfade/mc_oracle.hpp"
#include "blockfade/siso_bounds.hpp"
#include "blockfade/specfun.hpp"

namespace {

using namespace blockfade;

void BM_ScaledSum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(specfun::expint_scaled_sum(n, 2.0 + 1e-3 * n));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ScaledSum)->RangeMultiplier(10)->Range(10, 100000)->Complexity();

void BM_SeparateBound(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(siso::separate_bound(T, SnrValue::from_db(10.0)).value);
}
BENCHMARK(BM_SeparateBound)->Arg(10)->Arg(100)->Arg(1000);

void BM_PowerAdvantageAtSnr(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(siso::power_advantage_at_snr(50, SnrValue::from_db(10.0)).db);
}
BENCHMARK(BM_PowerAdvantageAtSnr);

void BM_SampleCapacity(benchmark::State& state) {
  mc::McConfig cfg;
  cfg.samples = static_cast<std::uint64_t>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mc::sample_capacity_siso(SnrValue::from_db(10.0), cfg).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleCapacity)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SampleMarquet(benchmark::State& state) {
  mc::McConfig cfg;
  cfg.samples = 100000;
  cfg.threads = 1;
  const int T = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc::sample_marquet_term(T, 1, SnrValue::from_db(10.0), cfg).mean);
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SampleMarquet)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SampleCtr(benchmark::State& state) {
  mc::McConfig cfg;
  cfg.samples = 20000;
  cfg.threads = 1;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc::sample_ctr(n, n, SnrValue::from_db(10.0), cfg).mean);
  state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK(BM_SampleCtr)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
