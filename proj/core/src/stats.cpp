#include "csma/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace csma::stats {

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("Ecdf needs at least one sample");
  std::stable_sort(sorted_.begin(), sorted_.end());
}

double Ecdf::quantile(double q) const {
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::domain_error("quantile level must lie in (0, 1], got " + std::to_string(q));
  }
  const auto n = static_cast<double>(sorted_.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  // q * n can land a hair above an integer through rounding, e.g. 0.99 * 100
  if (rank > 1 && static_cast<double>(rank - 1) >= q * n * (1.0 - 1e-12)) --rank;
  rank = std::clamp<std::size_t>(rank, 1, sorted_.size());
  return sorted_[rank - 1];
}

double Ecdf::cdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

Ecdf Ecdf::merged(const Ecdf& other) const {
  std::vector<double> all;
  all.reserve(sorted_.size() + other.sorted_.size());
  std::merge(sorted_.begin(), sorted_.end(), other.sorted_.begin(), other.sorted_.end(),
             std::back_inserter(all));
  return Ecdf(std::move(all));
}

double gain_percent(double proposed, double classical) {
  if (!(classical > 0.0)) throw std::domain_error("gain_percent: classical delay must be > 0");
  return 100.0 * (classical - proposed) / classical;
}

double relative_error(double simulated, double analytic) {
  if (analytic == 0.0) throw std::domain_error("relative_error: analytic value is zero");
  return std::abs(simulated - analytic) / std::abs(analytic);
}

}  // namespace csma::stats
