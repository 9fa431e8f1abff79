#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include <benchmark/benchmark.h>

#include "washtrace/graph.hpp"

namespace {

std::vector<std::pair<std::size_t, std::size_t>> random_arcs(std::size_t nodes, std::size_t arcs,
                                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, nodes - 1);
  std::vector<std::pair<std::size_t, std::size_t>> out(arcs);
  for (auto& a : out) a = {pick(rng), pick(rng)};
  return out;
}

void BM_SccRandom(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto arcs = random_arcs(n, 3 * n, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(washtrace::strongly_connected_components(n, arcs));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(arcs.size()));
}
BENCHMARK(BM_SccRandom)->RangeMultiplier(8)->Range(64, 262144);

void BM_SccLongPath(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t i = 0; i + 1 < n; ++i) arcs.emplace_back(i, i + 1);
  arcs.emplace_back(n - 1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(washtrace::strongly_connected_components(n, arcs));
  }
}
BENCHMARK(BM_SccLongPath)->Arg(1 << 16)->Arg(1 << 20);

}  // namespace
