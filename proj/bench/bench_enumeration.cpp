#include <benchmark/benchmark.h>

#include "gremfield/simulator.hpp"

namespace {

gremfield::SimulationSpec make_spec(int n) {
  gremfield::SimulationSpec s;
  s.size = n;
  s.op = gremfield::OrderParameter({0.5, 1.0}, {0.75, 1.0});
  s.h = 0.5;
  s.betas = {0.5, 1.5, 3.0};
  s.seed = 1;
  return s;
}

void BM_EnumerateParallel(benchmark::State& state) {
  const auto spec = make_spec(static_cast<int>(state.range(0)));
  gremfield::EnumerationOptions opt;
  opt.top_k = 64;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gremfield::enumerate_configurations(spec, 0, opt));
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}

void BM_EnumerateSerialReference(benchmark::State& state) {
  const auto spec = make_spec(static_cast<int>(state.range(0)));
  gremfield::EnumerationOptions opt;
  opt.top_k = 64;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gremfield::reference::enumerate_configurations_serial(spec, 0, opt));
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}

}  // namespace

BENCHMARK(BM_EnumerateParallel)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateSerialReference)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
