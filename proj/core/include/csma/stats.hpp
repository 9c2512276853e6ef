#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace csma::stats {

/// Empirical CDF over a non-empty sample set.
class Ecdf {
 public:
  /// Sorts a copy of the samples. Throws std::invalid_argument if empty.
  explicit Ecdf(std::vector<double> samples);

  /// Lower empirical quantile: sorted[ceil(q * n) - 1]. Throws
  /// std::domain_error unless 0 < q <= 1.
  double quantile(double q) const;

  /// Fraction of samples <= x.
  double cdf(double x) const;

  /// ECDF of the union of both sample sets.
  Ecdf merged(const Ecdf& other) const;

  std::size_t size() const noexcept { return sorted_.size(); }
  std::span<const double> samples() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// 100 * (classical - proposed) / classical. Throws std::domain_error if
/// classical <= 0.
double gain_percent(double proposed, double classical);

/// |simulated - analytic| / |analytic|. Throws std::domain_error if
/// analytic == 0.
double relative_error(double simulated, double analytic);

}  // namespace csma::stats
