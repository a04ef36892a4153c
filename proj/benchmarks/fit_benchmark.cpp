#include <benchmark/benchmark.h>

#include "kstar/baselines.hpp"
#include "kstar/kstar_means.hpp"
#include "kstar/synth.hpp"

namespace {

kstar::SynthInstance make_instance(std::size_t n) {
  kstar::SynthSpec spec;
  spec.true_k = 10;
  spec.min_sep = 5.0;
  spec.total_points = n;
  spec.seed = 7;
  return kstar::generate(spec);
}

void BM_KstarFit(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kstar::fit(inst.data).k());
  }
  state.SetComplexityN(state.range(0));
}

void BM_LloydTrueK(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    kstar::Rng rng(1);
    benchmark::DoNotOptimize(kstar::lloyd(inst.data, 10, rng).inertia);
  }
  state.SetComplexityN(state.range(0));
}

void BM_SweepBic(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    kstar::Rng rng(1);
    benchmark::DoNotOptimize(kstar::sweep_k_bic(inst.data, rng).chosen_k);
  }
}

}  // namespace

BENCHMARK(BM_KstarFit)->RangeMultiplier(2)->Range(1000, 32000)->Complexity()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LloydTrueK)->RangeMultiplier(2)->Range(1000, 32000)->Complexity()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepBic)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
