#include "csma/simulator.hpp"

#include <cassert>
#include <string>

#include "csma/parallel.hpp"

namespace csma::sim {

std::uint32_t backoff_on_success(Strategy strategy, std::uint32_t stage) {
  if (strategy == Strategy::Classical) return 0;
  return stage == 0 ? 0 : stage - 1;
}

std::uint32_t backoff_on_collision(Strategy /*strategy*/, std::uint32_t stage,
                                   std::uint32_t m) {
  return stage < m ? stage + 1 : m;
}

namespace {
__extension__ typedef unsigned __int128 Wide;
}  // namespace

std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  assert(bound > 0);
  Wide product = static_cast<Wide>(engine()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      product = static_cast<Wide>(engine()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

SimMetrics run(const SimConfig& config) {
  config.mac.validate();
  if (config.num_virtual_slots <= config.warmup_slots) {
    throw EmptyMeasurementError("no measured slots: num_virtual_slots (" +
                                std::to_string(config.num_virtual_slots) +
                                ") must exceed warmup_slots (" +
                                std::to_string(config.warmup_slots) + ")");
  }
  const SlotDurations timing = compute_timing(config.phy);
  const MacConfig& mac = config.mac;
  const Strategy strategy = mac.strategy;

  Engine engine(config.seed);
  std::vector<StationState> stations(mac.num_stations);
  for (auto& s : stations) {
    s.counter = uniform_below(engine, window(mac, 0));
  }

  SimMetrics metrics;
  metrics.stage_tx_histogram.assign(mac.max_stage + 1, 0);
  if (config.record_delays) {
    metrics.delay_samples.reserve(
        static_cast<std::size_t>((config.num_virtual_slots - config.warmup_slots) / 8));
  }

  std::vector<std::uint32_t> transmitters;
  transmitters.reserve(stations.size());
  double clock = 0.0;

  for (std::uint64_t slot = 0; slot < config.num_virtual_slots; ++slot) {
    const bool measured = slot >= config.warmup_slots;

    transmitters.clear();
    for (std::uint32_t i = 0; i < stations.size(); ++i) {
      if (stations[i].counter == 0) transmitters.push_back(i);
    }

    const bool busy = !transmitters.empty();
    if (!busy || !config.freeze_on_busy) {
      for (auto& s : stations) {
        if (s.counter > 0) --s.counter;
      }
    }

    if (!busy) {
      clock += timing.t_idle;
      if (measured) ++metrics.idle_slots;
    } else if (transmitters.size() == 1) {
      clock += timing.t_success;
      StationState& s = stations[transmitters.front()];
      if (measured) {
        ++metrics.success_slots;
        ++metrics.stage_tx_histogram[s.stage];
        if (config.record_delays) metrics.delay_samples.push_back(clock - s.hol_timestamp);
      }
      s.hol_timestamp = clock;
      s.stage = backoff_on_success(strategy, s.stage);
      s.counter = uniform_below(engine, window(mac, s.stage));
    } else {
      clock += timing.t_collision;
      if (measured) ++metrics.collision_slots;
      for (std::uint32_t i : transmitters) {
        StationState& s = stations[i];
        if (measured) ++metrics.stage_tx_histogram[s.stage];
        s.stage = backoff_on_collision(strategy, s.stage, mac.max_stage);
        s.counter = uniform_below(engine, window(mac, s.stage));
      }
    }

#ifndef NDEBUG
    for (const auto& s : stations) {
      assert(s.stage <= mac.max_stage);
      assert(s.counter < window(mac, s.stage));
    }
#endif
  }

  metrics.sim_time = static_cast<double>(metrics.idle_slots) * timing.t_idle +
                     static_cast<double>(metrics.success_slots) * timing.t_success +
                     static_cast<double>(metrics.collision_slots) * timing.t_collision;
  metrics.delivered_bits = static_cast<double>(metrics.success_slots) * config.phy.payload_bits;
  metrics.throughput_bps = metrics.delivered_bits / metrics.sim_time;
  return metrics;
}

std::vector<SimMetrics> replicate(const SimConfig& config, std::uint32_t n_runs,
                                  std::uint64_t seed_base, unsigned jobs) {
  if (n_runs < 1) throw std::invalid_argument("replicate: n_runs must be >= 1");
  std::vector<SimMetrics> out(n_runs);
  parallel_for(n_runs, jobs, [&](std::size_t i) {
    SimConfig c = config;
    c.seed = seed_base + i;
    try {
      out[i] = run(c);
    } catch (const std::exception& e) {
      throw std::runtime_error("run with seed " + std::to_string(c.seed) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace csma::sim
