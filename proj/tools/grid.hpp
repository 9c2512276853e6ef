#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace csma::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "a..b" (inclusive) ranges and comma lists, e.g. "5..10,20,50".
/// Values keep their written order; duplicates are dropped. Throws UsageError.
std::vector<std::uint32_t> parse_grid(std::string_view text);

}  // namespace csma::cli
