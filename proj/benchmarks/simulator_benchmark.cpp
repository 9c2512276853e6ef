#include <benchmark/benchmark.h>

#include "csma/simulator.hpp"

namespace {

void BM_SimulatorSlots(benchmark::State& state) {
  csma::sim::SimConfig config;
  config.mac.num_stations = static_cast<std::uint32_t>(state.range(0));
  config.mac.max_stage = 7;
  config.warmup_slots = 0;
  config.num_virtual_slots = 100'000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(csma::sim::run(config));
    ++config.seed;
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(config.num_virtual_slots));
}
BENCHMARK(BM_SimulatorSlots)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
