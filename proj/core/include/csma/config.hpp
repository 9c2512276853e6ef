#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>

#include "csma/model.hpp"

namespace csma {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario read from a key/value file with `[phy]` and `[mac]` sections.
/// Keys are the PhyParameters / MacConfig field names; anything omitted keeps
/// its default.
struct ScenarioConfig {
  PhyParameters phy;
  MacConfig mac;
  /// "section.key" for every key present in the file.
  std::set<std::string> keys;

  bool has(const std::string& key) const { return keys.contains(key); }
};

/// Throws ConfigError on syntax errors, unknown sections/keys, unparsable
/// values, or values violating PhyParameters/MacConfig invariants.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace csma
