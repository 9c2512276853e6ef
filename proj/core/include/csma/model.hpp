#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace csma {

/// Backoff rule applied after a collision-free transmission.
///
/// Both strategies double the window on collision (saturating at the last
/// stage). On success, `Classical` resets to stage 0 while `Proposed` halves
/// the window, i.e. steps down a single stage.
enum class Strategy { Proposed, Classical };

std::string_view to_string(Strategy s) noexcept;

/// Parses "proposed" or "classical" (case-sensitive). Throws std::invalid_argument.
Strategy parse_strategy(std::string_view name);

/// Frame lengths in bits and timing constants in seconds.
///
/// ACK/RTS/CTS lengths exclude the PHY header; compute_timing() adds it.
/// Defaults are the FHSS 802.11 PHY at 1 Mbit/s.
struct PhyParameters {
  double payload_bits = 8184.0;
  double mac_header_bits = 272.0;
  double phy_header_bits = 128.0;
  double ack_bits = 112.0;
  double rts_bits = 160.0;
  double cts_bits = 112.0;
  double bit_rate = 1.0e6;           // bits/s
  double propagation_delay = 1.0e-6;
  double sifs = 28.0e-6;
  double slot_time = 50.0e-6;
  double difs = 128.0e-6;

  /// Throws std::invalid_argument naming the first non-positive field.
  void validate() const;

  bool operator==(const PhyParameters&) const = default;
};

struct MacConfig {
  Strategy strategy = Strategy::Proposed;
  std::uint32_t num_stations = 1;
  std::uint32_t max_stage = 3;
  std::uint32_t min_window = 16;

  /// Throws std::invalid_argument unless N >= 1, 1 <= m <= kMaxStage, W >= 2.
  void validate() const;

  bool operator==(const MacConfig&) const = default;

  static constexpr std::uint32_t kMaxStage = 24;
};

struct SlotDurations {
  double t_success = 0.0;
  double t_collision = 0.0;
  double t_idle = 0.0;
};

/// Contention window of a stage: 2^stage * W. Backoff counters at that stage
/// are uniform on {0, ..., window - 1}. Throws std::out_of_range if stage > m.
std::uint64_t window(const MacConfig& config, std::uint32_t stage);

/// RTS/CTS virtual-slot durations.
///
///   T_s = RTS + SIFS + d + CTS + SIFS + d + H + L + SIFS + d + ACK + DIFS + d
///   T_c = RTS + DIFS + d
///   T_id = slot time
///
/// where d is the propagation delay, RTS/CTS/ACK include the PHY header and
/// H = MAC + PHY header. Throws std::invalid_argument if bit_rate <= 0.
SlotDurations compute_timing(const PhyParameters& phy);

}  // namespace csma
