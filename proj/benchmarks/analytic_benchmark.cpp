#include <benchmark/benchmark.h>

#include "csma/analytic.hpp"

namespace {

using csma::MacConfig;
using csma::Strategy;
namespace analytic = csma::analytic;

void BM_PiProposed(benchmark::State& state) {
  const auto m = static_cast<std::uint32_t>(state.range(0));
  double p = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic::pi_proposed(p, m, 16));
    p = p < 0.95 ? p + 1e-3 : 0.0;
  }
}
BENCHMARK(BM_PiProposed)->Arg(3)->Arg(7);

void BM_SolveFixedPoint(benchmark::State& state) {
  MacConfig config;
  config.strategy = state.range(0) == 0 ? Strategy::Proposed : Strategy::Classical;
  config.num_stations = 50;
  config.max_stage = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic::solve_fixed_point(config));
  }
}
BENCHMARK(BM_SolveFixedPoint)->Arg(0)->Arg(1);

void BM_StationaryOracle(benchmark::State& state) {
  const auto m = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic::stationary_oracle(Strategy::Proposed, 0.3, m, 16));
  }
}
BENCHMARK(BM_StationaryOracle)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace
