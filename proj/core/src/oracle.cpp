#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "csma/analytic.hpp"

namespace csma::analytic {

OracleResult stationary_oracle(Strategy strategy, double p, std::uint32_t m,
                               std::uint32_t w, const OracleOptions& options) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::domain_error("collision probability must lie in [0, 1), got " +
                            std::to_string(p));
  }
  if (m < 1 || m > MacConfig::kMaxStage || w < 1) {
    throw std::invalid_argument("stationary_oracle: invalid chain dimensions");
  }

  // Flat layout: stage i occupies [offset[i], offset[i] + size[i]), index k is
  // the counter value.
  std::vector<std::size_t> size(m + 1), offset(m + 2, 0);
  for (std::uint32_t i = 0; i <= m; ++i) {
    size[i] = std::size_t{w} << i;
    offset[i + 1] = offset[i] + size[i];
  }
  const std::size_t states = offset[m + 1];

  auto success_target = [&](std::uint32_t i) -> std::uint32_t {
    if (strategy == Strategy::Classical) return 0;
    return i == 0 ? 0 : i - 1;
  };

  std::vector<double> x(states, 1.0 / static_cast<double>(states));
  std::vector<double> next(states);
  std::vector<double> inflow(m + 1);

  OracleResult result;
  result.residual = 1.0;
  while (result.iterations < options.max_iterations) {
    std::fill(inflow.begin(), inflow.end(), 0.0);
    for (std::uint32_t i = 0; i <= m; ++i) {
      const double tx = x[offset[i]];
      inflow[std::min(i + 1, m)] += p * tx;
      inflow[success_target(i)] += (1.0 - p) * tx;
    }
    double diff = 0.0;
    for (std::uint32_t i = 0; i <= m; ++i) {
      const double fresh = inflow[i] / static_cast<double>(size[i]);
      const std::size_t base = offset[i];
      const std::size_t last = base + size[i] - 1;
      for (std::size_t s = base; s < last; ++s) {
        next[s] = x[s + 1] + fresh;
        diff += std::abs(next[s] - x[s]);
      }
      next[last] = fresh;
      diff += std::abs(next[last] - x[last]);
    }
    x.swap(next);
    ++result.iterations;
    result.residual = diff;
    if (diff < options.tolerance) break;
  }
  if (!(result.residual < options.tolerance)) {
    throw NumericalError("stationary oracle did not converge within " +
                             std::to_string(options.max_iterations) + " iterations",
                         result.residual);
  }

  double total = 0.0;
  for (double v : x) total += v;
  result.stage_occupancy.resize(m + 1);
  for (std::uint32_t i = 0; i <= m; ++i) {
    result.stage_occupancy[i] = x[offset[i]] / total;
    result.pi += result.stage_occupancy[i];
  }
  return result;
}

}  // namespace csma::analytic
