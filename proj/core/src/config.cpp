#include "csma/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>

namespace csma {
namespace {

namespace pt = boost::property_tree;

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': not a number: '" + text + "'");
}

std::uint32_t to_count(const std::string& key, const std::string& text) {
  std::uint32_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("config key '" + key + "': not a non-negative integer: '" +
                      text + "'");
  }
  return v;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto phy = [&t](const char* name, double PhyParameters::*field) {
      t[std::string("phy.") + name] = [field](ScenarioConfig& c, const std::string& k,
                                              const std::string& v) {
        c.phy.*field = to_double(k, v);
      };
    };
    phy("payload_bits", &PhyParameters::payload_bits);
    phy("mac_header_bits", &PhyParameters::mac_header_bits);
    phy("phy_header_bits", &PhyParameters::phy_header_bits);
    phy("ack_bits", &PhyParameters::ack_bits);
    phy("rts_bits", &PhyParameters::rts_bits);
    phy("cts_bits", &PhyParameters::cts_bits);
    phy("bit_rate", &PhyParameters::bit_rate);
    phy("propagation_delay", &PhyParameters::propagation_delay);
    phy("sifs", &PhyParameters::sifs);
    phy("slot_time", &PhyParameters::slot_time);
    phy("difs", &PhyParameters::difs);

    auto mac = [&t](const char* name, std::uint32_t MacConfig::*field) {
      t[std::string("mac.") + name] = [field](ScenarioConfig& c, const std::string& k,
                                              const std::string& v) {
        c.mac.*field = to_count(k, v);
      };
    };
    mac("num_stations", &MacConfig::num_stations);
    mac("max_stage", &MacConfig::max_stage);
    mac("min_window", &MacConfig::min_window);
    t["mac.strategy"] = [](ScenarioConfig& c, const std::string&, const std::string& v) {
      try {
        c.mac.strategy = parse_strategy(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'mac.strategy': ") + e.what());
      }
    };
    return t;
  }();
  return table;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  ScenarioConfig config;
  for (const auto& [section, body] : tree) {
    if (section != "phy" && section != "mac") {
      throw ConfigError("unknown config section '" + section + "'");
    }
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config key '" + section + "' must live in a section");
    }
    for (const auto& [name, leaf] : body) {
      const std::string key = section + "." + name;
      const auto it = setters().find(key);
      if (it == setters().end()) {
        throw ConfigError("unknown config key '" + key + "'");
      }
      it->second(config, key, leaf.get_value<std::string>());
      config.keys.insert(key);
    }
  }

  try {
    config.phy.validate();
    config.mac.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  return parse_config(in);
}

}  // namespace csma
