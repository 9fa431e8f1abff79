#include <benchmark/benchmark.h>

#include "washtrace/pipeline.hpp"
#include "washtrace/synth.hpp"

namespace {

void BM_Pipeline(benchmark::State& state) {
  const auto data = washtrace::generate_dataset(
      washtrace::default_mix(static_cast<std::size_t>(state.range(0))), 11);
  const auto inputs = data.to_inputs();
  washtrace::PipelineOptions options;
  options.jobs = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(washtrace::run_pipeline(inputs, options));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Pipeline)->Args({500, 1})->Args({5000, 1})->Args({5000, 4})->Unit(benchmark::kMillisecond);

void BM_Synth(benchmark::State& state) {
  const auto mix = washtrace::default_mix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(washtrace::generate_dataset(mix, 11));
  }
}
BENCHMARK(BM_Synth)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
