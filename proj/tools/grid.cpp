#include "grid.hpp"

#include <algorithm>
#include <charconv>
#include <string>

namespace csma::cli {
namespace {

std::uint32_t parse_count(std::string_view token, std::string_view whole) {
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
    throw UsageError("invalid grid '" + std::string(whole) + "': bad number '" +
                     std::string(token) + "'");
  }
  return v;
}

}  // namespace

std::vector<std::uint32_t> parse_grid(std::string_view text) {
  std::vector<std::uint32_t> out;
  auto push = [&out](std::uint32_t v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    const std::size_t dots = item.find("..");
    if (dots == std::string_view::npos) {
      push(parse_count(item, text));
    } else {
      const std::uint32_t lo = parse_count(item.substr(0, dots), text);
      const std::uint32_t hi = parse_count(item.substr(dots + 2), text);
      if (lo > hi) {
        throw UsageError("invalid grid '" + std::string(text) + "': empty range");
      }
      for (std::uint32_t v = lo; v <= hi; ++v) push(v);
    }
    start = comma + 1;
  }
  return out;
}

}  // namespace csma::cli
