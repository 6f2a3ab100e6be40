#include <benchmark/benchmark.h>

#include <cstdint>

#include "snc/corpus.hpp"
#include "snc/rng.hpp"
#include "snc/simulator.hpp"

namespace {

void BM_Philox(benchmark::State& state) {
  snc::PhiloxStream s(1, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s());
}
BENCHMARK(BM_Philox);

// Slots per second on the three-server corpus networks.
void BM_Simulate(benchmark::State& state) {
  const auto net = state.range(0) == 0 ? snc::corpus::fig1b() : snc::corpus::sinktree_up();
  snc::SimConfig cfg;
  cfg.steps = 200'000;
  cfg.policy = state.range(1) == 0 ? snc::Policy::CrossPriority : snc::Policy::FifoAggregate;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(snc::simulate(net, cfg));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.steps));
}
BENCHMARK(BM_Simulate)->Args({0, 0})->Args({0, 1})->Args({1, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
