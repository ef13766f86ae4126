#include <benchmark/benchmark.h>

#include "sdlab/diophantine.hpp"
#include "sdlab/divisor_sums.hpp"
#include "sdlab/moving_target.hpp"
#include "sdlab/rng.hpp"
#include "sdlab/rubin_model.hpp"

using namespace sdlab;

namespace {

void BM_HitsFast(benchmark::State& state) {
  SplitMix64 rng(1);
  const TorusPoint beta = rng.torus_point();
  const auto psi = ApproxFunction::power(0.5L, 1);
  const auto targets = TargetFamily::constant(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hits_fast(beta, psi, targets, state.range(0)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HitsFast)->Arg(10'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_HitsBrute(benchmark::State& state) {
  SplitMix64 rng(1);
  const TorusPoint beta = rng.torus_point();
  const auto psi = ApproxFunction::power(0.5L, 1);
  const auto targets = TargetFamily::constant(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hits_brute(beta, psi, targets, state.range(0)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HitsBrute)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_CriticalHits(benchmark::State& state) {
  SplitMix64 rng(2);
  const TorusPoint beta = rng.torus_point();
  const CriticalForm form{Form::F48, 1.0L, 0.5L};
  for (auto _ : state) {
    benchmark::DoNotOptimize(critical_hits(beta, form, state.range(0)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CriticalHits)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

// pruning is the whole point of the scan; compare both paths
void BM_ScanSmallDivisors(benchmark::State& state) {
  SplitMix64 rng(3);
  const RubinParams p = make_params(3, 2.5L, rng.torus_point());
  const bool prune = state.range(1) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scan_small_divisors(p, 1.0L, state.range(0), {1, 128, prune}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScanSmallDivisors)->Args({100'000, 1})->Args({100'000, 0})->Unit(benchmark::kMillisecond);

void BM_Sieve(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sieve(state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sieve)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_EqSetIntersect(benchmark::State& state) {
  const auto [lpsi, targets] = lemma_key_family(0.3L, 0.1L, 0.2L);
  const std::uint64_t q = state.range(0);
  const IntervalUnion eq = build_eq_set(q, lpsi, targets);
  const IntervalUnion er = build_eq_set(q - 1, lpsi, targets);
  for (auto _ : state) benchmark::DoNotOptimize(eq.intersect(er).measure());
}
BENCHMARK(BM_EqSetIntersect)->Arg(400)->Arg(10'000);

void BM_OverlapSweep(benchmark::State& state) {
  const auto psi = ApproxFunction::power(0.3L, 1);
  const auto targets = TargetFamily::constant(0.25L);
  for (auto _ : state) benchmark::DoNotOptimize(overlap_sweep(50, state.range(0), psi, targets));
}
BENCHMARK(BM_OverlapSweep)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
