#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "csma/model.hpp"

namespace csma::analytic {

/// Raised when a root bracket, an iteration cap or a residual bound fails.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Which expression of the per-slot transmission probability pi(p) to use for
/// the half-window strategy. The classical strategy has a single closed form.
///
/// PublishedClosedForm evaluates the published normalization and access
/// probability verbatim. ChainExact is the exact stationary solution of the
/// same (stage, counter) chain the simulator runs; it matches
/// stationary_oracle() to rounding. The two differ (see formula_audit()).
enum class AnalyticPath { PublishedClosedForm, ChainExact };

std::string_view to_string(AnalyticPath path) noexcept;
AnalyticPath parse_path(std::string_view name);

struct FixedPointSolution {
  double p = 0.0;
  double pi = 0.0;
  double b00 = 0.0;
  /// b_{i,0} for i = 0..m, sums to pi.
  std::vector<double> stage_occupancy;
  /// |p - 1 + (1 - pi)^(N-1)| at the returned p.
  double residual = 0.0;
};

struct ThroughputReport {
  double p_tr = 0.0;
  double p_s = 0.0;
  double tau = 0.0;            // bits/s
  double expected_slot = 0.0;  // seconds
};

struct OracleResult {
  double pi = 0.0;
  std::vector<double> stage_occupancy;
  std::uint64_t iterations = 0;
  /// L1 distance between the last two iterates.
  double residual = 0.0;
};

/// 1 - (1 - pi)^(n - 1). Throws std::domain_error if pi is outside [0, 1]
/// or n < 1.
double collision_prob(double pi, std::uint32_t n);

/// Published access probability of the half-window strategy, W_min := w_min.
/// Removable singularities at p = 1/2 and p = 1/3 are evaluated by direct
/// geometric summation. Throws std::domain_error unless 0 <= p < 1.
double pi_proposed(double p, std::uint32_t m, std::uint32_t w_min);

/// Exact pi of the half-window chain with stages 0..m and windows 2^i * w:
///   b00 = 2 / sum_i (2^i w + 1) r^i,  pi = b00 * sum_i r^i,  r = p / (1 - p).
double pi_proposed_chain(double p, std::uint32_t m, std::uint32_t w);

/// Binary-exponential backoff with reset on success:
///   2(1 - 2p) / ((1 - 2p)(w + 1) + p w (1 - (2p)^m)).
double pi_classical(double p, std::uint32_t m, std::uint32_t w);

/// pi(p) for a strategy along the requested path.
double transmission_prob(Strategy strategy, AnalyticPath path, double p,
                         std::uint32_t m, std::uint32_t w);

struct OracleOptions {
  double tolerance = 1e-12;
  std::uint64_t max_iterations = 1'000'000;
};

/// Stationary distribution of the full (stage, counter) backoff chain by
/// power iteration from the uniform vector. Counters decrement with
/// probability 1; at counter 0 the station transmits and moves to stage
/// min(i+1, m) with probability p, otherwise to max(i-1, 0) (Proposed) or 0
/// (Classical); the new counter is uniform in the new window.
///
/// Throws NumericalError (carrying the residual) when the iteration cap is
/// reached, std::domain_error unless 0 <= p < 1.
OracleResult stationary_oracle(Strategy strategy, double p, std::uint32_t m,
                               std::uint32_t w, const OracleOptions& options = {});

/// Solves p = 1 - (1 - pi(p))^(N-1) by bisection on [0, 1 - 1e-12].
FixedPointSolution solve_fixed_point(const MacConfig& config,
                                     AnalyticPath path = AnalyticPath::PublishedClosedForm);

/// Saturation throughput of a solved configuration.
ThroughputReport throughput(const FixedPointSolution& solution, const MacConfig& config,
                            const PhyParameters& phy);

struct SweepRow {
  Strategy strategy = Strategy::Proposed;
  std::uint32_t num_stations = 0;
  std::uint32_t max_stage = 0;
  std::uint32_t min_window = 0;
  std::optional<FixedPointSolution> solution;
  std::optional<ThroughputReport> report;
  /// Set when the grid point failed; solution/report are then empty.
  std::string error;

  bool ok() const { return error.empty(); }
};

struct SweepGrid {
  std::vector<Strategy> strategies;
  std::vector<std::uint32_t> num_stations;
  std::vector<std::uint32_t> max_stages;
};

/// One row per (strategy, m, N) in that nesting order, independent of `jobs`.
/// Per-point failures are stored in SweepRow::error. Throws
/// std::invalid_argument on an empty grid axis.
std::vector<SweepRow> sweep(const MacConfig& config_template, const PhyParameters& phy,
                            const SweepGrid& grid,
                            AnalyticPath path = AnalyticPath::PublishedClosedForm,
                            unsigned jobs = 1);

struct AuditRow {
  Strategy strategy = Strategy::Proposed;
  std::uint32_t max_stage = 0;
  std::uint32_t min_window = 0;
  double p = 0.0;
  double closed_form_pi = 0.0;  // pi_proposed / pi_classical
  double chain_pi = 0.0;        // pi_proposed_chain / pi_classical
  double oracle_pi = 0.0;
  std::uint64_t oracle_iterations = 0;

  double closed_form_error() const;
  double chain_error() const;
};

/// Compares the closed forms with the power-iteration oracle on every
/// (strategy, m, p) combination.
std::vector<AuditRow> formula_audit(std::span<const Strategy> strategies,
                                    std::span<const std::uint32_t> max_stages,
                                    std::span<const double> p_grid, std::uint32_t w,
                                    unsigned jobs = 1);

}  // namespace csma::analytic
