#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "csma/model.hpp"

namespace csma::sim {

/// Pseudo-random engine behind every run; its name is written to run metadata.
using Engine = std::mt19937_64;
inline constexpr std::string_view kEngineName = "mt19937_64";

/// Thrown when a configuration leaves no slot to measure.
class EmptyMeasurementError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Stage after a collision-free transmission.
std::uint32_t backoff_on_success(Strategy strategy, std::uint32_t stage);

/// Stage after a collision: one up, saturating at m.
std::uint32_t backoff_on_collision(Strategy strategy, std::uint32_t stage, std::uint32_t m);

struct StationState {
  std::uint32_t stage = 0;
  std::uint64_t counter = 0;
  double hol_timestamp = 0.0;
};

struct SimConfig {
  MacConfig mac;
  PhyParameters phy;
  /// Total virtual slots, warm-up included.
  std::uint64_t num_virtual_slots = 1'010'000;
  std::uint64_t seed = 1;
  std::uint64_t warmup_slots = 10'000;
  /// Non-transmitters keep their counter during busy slots when set.
  bool freeze_on_busy = false;
  bool record_delays = true;
};

struct SimMetrics {
  std::uint64_t idle_slots = 0;
  std::uint64_t success_slots = 0;
  std::uint64_t collision_slots = 0;
  double sim_time = 0.0;
  double delivered_bits = 0.0;
  double throughput_bps = 0.0;
  /// Access delay of each packet delivered in the measurement window, seconds.
  std::vector<double> delay_samples;
  /// Transmission attempts per stage, index 0..m.
  std::vector<std::uint64_t> stage_tx_histogram;

  std::uint64_t measured_slots() const {
    return idle_slots + success_slots + collision_slots;
  }
  bool operator==(const SimMetrics&) const = default;
};

/// Uniform integer in [0, bound) without modulo bias (Lemire's method).
/// Deterministic for a given engine state on every platform.
std::uint64_t uniform_below(Engine& engine, std::uint64_t bound);

/// Slot-synchronous saturated RTS/CTS simulation.
///
/// Each virtual slot the stations whose counter is 0 transmit: none gives an
/// idle slot (T_id), one a success (T_s), several a collision (T_c).
/// Transmitters move stage and redraw their counter uniformly in the new
/// window; every other station decrements by one (or, with freeze_on_busy,
/// only in idle slots). A packet's access delay runs from the end of the
/// station's previous success to the end of its own success slot.
///
/// Throws EmptyMeasurementError if num_virtual_slots <= warmup_slots.
SimMetrics run(const SimConfig& config);

/// Runs seeds seed_base, seed_base + 1, ... and returns metrics in seed
/// order. A failing run is rethrown as std::runtime_error naming its seed.
std::vector<SimMetrics> replicate(const SimConfig& config, std::uint32_t n_runs,
                                  std::uint64_t seed_base, unsigned jobs = 1);

}  // namespace csma::sim
