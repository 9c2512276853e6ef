#include "csma/model.hpp"

#include <cmath>
#include <string>

namespace csma {

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::Proposed:
      return "proposed";
    case Strategy::Classical:
      return "classical";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "proposed") return Strategy::Proposed;
  if (name == "classical") return Strategy::Classical;
  throw std::invalid_argument("unknown strategy '" + std::string(name) +
                              "' (expected proposed|classical)");
}

void PhyParameters::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"payload_bits", payload_bits},
      {"mac_header_bits", mac_header_bits},
      {"phy_header_bits", phy_header_bits},
      {"ack_bits", ack_bits},
      {"rts_bits", rts_bits},
      {"cts_bits", cts_bits},
      {"bit_rate", bit_rate},
      {"propagation_delay", propagation_delay},
      {"sifs", sifs},
      {"slot_time", slot_time},
      {"difs", difs},
  };
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument(std::string("phy.") + name +
                                  " must be strictly positive");
    }
  }
}

void MacConfig::validate() const {
  if (num_stations < 1) {
    throw std::invalid_argument("mac.num_stations must be >= 1");
  }
  if (max_stage < 1 || max_stage > kMaxStage) {
    throw std::invalid_argument("mac.max_stage must be in [1, " +
                                std::to_string(kMaxStage) + "]");
  }
  if (min_window < 2) {
    throw std::invalid_argument("mac.min_window must be >= 2");
  }
}

std::uint64_t window(const MacConfig& config, std::uint32_t stage) {
  if (stage > config.max_stage) {
    throw std::out_of_range("backoff stage " + std::to_string(stage) +
                            " exceeds max stage " +
                            std::to_string(config.max_stage));
  }
  return std::uint64_t{config.min_window} << stage;
}

SlotDurations compute_timing(const PhyParameters& phy) {
  if (!(phy.bit_rate > 0.0)) {
    throw std::invalid_argument("phy.bit_rate must be strictly positive");
  }
  const double bit = 1.0 / phy.bit_rate;
  const double rts = (phy.rts_bits + phy.phy_header_bits) * bit;
  const double cts = (phy.cts_bits + phy.phy_header_bits) * bit;
  const double ack = (phy.ack_bits + phy.phy_header_bits) * bit;
  const double header = (phy.mac_header_bits + phy.phy_header_bits) * bit;
  const double payload = phy.payload_bits * bit;
  const double gap = phy.sifs + phy.propagation_delay;

  SlotDurations d;
  d.t_success = rts + gap + cts + gap + header + payload + gap + ack +
                phy.difs + phy.propagation_delay;
  d.t_collision = rts + phy.difs + phy.propagation_delay;
  d.t_idle = phy.slot_time;
  return d;
}

}  // namespace csma
