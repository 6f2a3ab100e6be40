#include <benchmark/benchmark.h>

#include "snc/analyzer.hpp"
#include "snc/corpus.hpp"
#include "snc/genfunc.hpp"

namespace {

void BM_Characterize(benchmark::State& state) {
  const auto net = snc::corpus::fig1b();
  double theta = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(snc::characterize_network(net, theta));
    theta = theta < 0.3 ? theta + 1e-4 : 0.05;
  }
}
BENCHMARK(BM_Characterize);

void BM_TailSum(benchmark::State& state) {
  const snc::RationalGf gf(0.3, {0.9, 0.95, 0.97, 0.99});
  const auto t = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gf.log_tail_sum(1.001, t));
}
BENCHMARK(BM_TailSum)->Arg(10)->Arg(100)->Arg(1000);

void BM_PmooQuantile(benchmark::State& state) {
  for (auto _ : state) {
    snc::Analyzer a(snc::corpus::fig1a());
    benchmark::DoNotOptimize(a.quantile(snc::Method::pmoo(), 1e-4));
  }
}
BENCHMARK(BM_PmooQuantile)->Unit(benchmark::kMillisecond);

void BM_MartingaleQuantile(benchmark::State& state) {
  for (auto _ : state) {
    snc::Analyzer a(snc::corpus::fig1b());
    benchmark::DoNotOptimize(a.quantile(snc::Method::martingale(2), 1e-4));
  }
}
BENCHMARK(BM_MartingaleQuantile)->Unit(benchmark::kMillisecond);

}  // namespace
