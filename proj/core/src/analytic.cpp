#include "csma/analytic.hpp"

#include <cmath>
#include <string>

#include "csma/parallel.hpp"

namespace csma::analytic {
namespace {

constexpr double kSingularityBand = 1e-6;
constexpr double kBracketEpsilon = 1e-12;
constexpr double kRootTolerance = 1e-12;
constexpr double kResidualBound = 1e-10;

void check_p(double p) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::domain_error("collision probability must lie in [0, 1), got " +
                            std::to_string(p));
  }
}

// sum_{i=0}^{terms-1} x^i
double geometric_sum(double x, std::uint32_t terms) {
  double sum = 0.0;
  double power = 1.0;
  for (std::uint32_t i = 0; i < terms; ++i) {
    sum += power;
    power *= x;
  }
  return sum;
}

struct PublishedTerms {
  double b00;
  double pi;
};

PublishedTerms published_terms(double p, std::uint32_t m, std::uint32_t w_min) {
  check_p(p);
  const double w = w_min;
  double doubled_sum;  // sum_{i<m} (2p/(1-p))^i
  double plain_sum;    // sum_{i<m} (p/(1-p))^i
  if (std::abs(1.0 - 2.0 * p) < kSingularityBand ||
      std::abs(1.0 - 3.0 * p) < kSingularityBand) {
    const double r = p / (1.0 - p);
    doubled_sum = geometric_sum(2.0 * r, m);
    plain_sum = geometric_sum(r, m);
  } else {
    const double q = 1.0 - p;
    const double qm1 = std::pow(q, m - 1.0);
    const double qm = qm1 * q;
    doubled_sum = (qm - std::pow(2.0 * p, m)) / ((1.0 - 3.0 * p) * qm1);
    plain_sum = (qm - std::pow(p, m)) / ((1.0 - 2.0 * p) * qm1);
  }
  const double b00 = 2.0 / (w + 1.0 + w * doubled_sum + plain_sum);
  return {b00, b00 * plain_sum};
}

struct ChainTerms {
  double b00;
  double pi;
  std::vector<double> occupancy;
};

ChainTerms chain_terms(double p, std::uint32_t m, std::uint32_t w) {
  check_p(p);
  const double r = p / (1.0 - p);
  double mass = 0.0;  // sum_i (2^i w + 1)/2 * r^i, per unit b00
  std::vector<double> ratio(m + 1);
  double power = 1.0;
  for (std::uint32_t i = 0; i <= m; ++i) {
    ratio[i] = power;
    mass += (std::ldexp(static_cast<double>(w), static_cast<int>(i)) + 1.0) * power;
    power *= r;
  }
  ChainTerms t;
  t.b00 = 2.0 / mass;
  t.pi = 0.0;
  t.occupancy.resize(m + 1);
  for (std::uint32_t i = 0; i <= m; ++i) {
    t.occupancy[i] = ratio[i] * t.b00;
    t.pi += t.occupancy[i];
  }
  return t;
}

std::vector<double> classical_occupancy(double p, double pi, std::uint32_t m) {
  // b_{i,0} = p^i b00 for i < m, b_{m,0} = p^m / (1 - p) b00, b00 = pi (1 - p)
  std::vector<double> occ(m + 1);
  const double b00 = pi * (1.0 - p);
  double power = 1.0;
  for (std::uint32_t i = 0; i < m; ++i) {
    occ[i] = power * b00;
    power *= p;
  }
  occ[m] = power * pi;
  return occ;
}

}  // namespace

std::string_view to_string(AnalyticPath path) noexcept {
  return path == AnalyticPath::PublishedClosedForm ? "published" : "chain";
}

AnalyticPath parse_path(std::string_view name) {
  if (name == "published") return AnalyticPath::PublishedClosedForm;
  if (name == "chain") return AnalyticPath::ChainExact;
  throw std::invalid_argument("unknown analytic path '" + std::string(name) +
                              "' (expected published|chain)");
}

double collision_prob(double pi, std::uint32_t n) {
  if (!(pi >= 0.0 && pi <= 1.0)) {
    throw std::domain_error("transmission probability must lie in [0, 1], got " +
                            std::to_string(pi));
  }
  if (n < 1) throw std::domain_error("number of stations must be >= 1");
  return 1.0 - std::pow(1.0 - pi, n - 1.0);
}

double pi_proposed(double p, std::uint32_t m, std::uint32_t w_min) {
  return published_terms(p, m, w_min).pi;
}

double pi_proposed_chain(double p, std::uint32_t m, std::uint32_t w) {
  return chain_terms(p, m, w).pi;
}

double pi_classical(double p, std::uint32_t m, std::uint32_t w) {
  check_p(p);
  const double wd = w;
  if (std::abs(1.0 - 2.0 * p) < kSingularityBand) {
    // divide through by (1 - 2p): (1 - (2p)^m)/(1 - 2p) = sum_{i<m} (2p)^i
    return 2.0 / (wd + 1.0 + p * wd * geometric_sum(2.0 * p, m));
  }
  const double a = 1.0 - 2.0 * p;
  return 2.0 * a / (a * (wd + 1.0) + p * wd * (1.0 - std::pow(2.0 * p, m)));
}

double transmission_prob(Strategy strategy, AnalyticPath path, double p, std::uint32_t m,
                         std::uint32_t w) {
  if (strategy == Strategy::Classical) return pi_classical(p, m, w);
  return path == AnalyticPath::PublishedClosedForm ? pi_proposed(p, m, w)
                                               : pi_proposed_chain(p, m, w);
}

FixedPointSolution solve_fixed_point(const MacConfig& config, AnalyticPath path) {
  config.validate();
  const std::uint32_t n = config.num_stations;
  const std::uint32_t m = config.max_stage;
  const std::uint32_t w = config.min_window;
  auto pi_of = [&](double p) { return transmission_prob(config.strategy, path, p, m, w); };
  auto g = [&](double p) { return p - 1.0 + std::pow(1.0 - pi_of(p), n - 1.0); };

  double p = 0.0;
  double lo = 0.0;
  double hi = 1.0 - kBracketEpsilon;
  double g_lo = g(lo);
  if (n > 1 && g_lo != 0.0) {
    double g_hi = g(hi);
    if (!(g_lo < 0.0 && g_hi > 0.0)) {
      throw NumericalError("fixed point is not bracketed on [0, 1)",
                           std::min(std::abs(g_lo), std::abs(g_hi)));
    }
    for (int iter = 0; iter < 200 && hi - lo > kRootTolerance; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double g_mid = g(mid);
      if (g_mid == 0.0) {
        lo = hi = mid;
        g_lo = g_hi = 0.0;
        break;
      }
      if (g_mid > 0.0) {
        hi = mid;
        g_hi = g_mid;
      } else {
        lo = mid;
        g_lo = g_mid;
      }
    }
    p = std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
  }

  FixedPointSolution s;
  s.p = p;
  s.residual = std::abs(g(p));
  if (!(s.residual <= kResidualBound)) {
    throw NumericalError("fixed-point residual above bound", s.residual);
  }
  if (config.strategy == Strategy::Classical) {
    s.pi = pi_classical(p, m, w);
    s.stage_occupancy = classical_occupancy(p, s.pi, m);
    s.b00 = s.stage_occupancy.front();
  } else if (path == AnalyticPath::ChainExact) {
    auto t = chain_terms(p, m, w);
    s.pi = t.pi;
    s.b00 = t.b00;
    s.stage_occupancy = std::move(t.occupancy);
  } else {
    // Geometric profile r^i rescaled so that the stages sum to the published pi.
    const auto t = published_terms(p, m, w);
    s.pi = t.pi;
    s.b00 = t.b00;
    const auto shape = chain_terms(p, m, w);
    s.stage_occupancy.resize(m + 1);
    for (std::uint32_t i = 0; i <= m; ++i) {
      s.stage_occupancy[i] = shape.occupancy[i] / shape.pi * t.pi;
    }
  }
  return s;
}

ThroughputReport throughput(const FixedPointSolution& solution, const MacConfig& config,
                            const PhyParameters& phy) {
  const SlotDurations d = compute_timing(phy);
  const double pi = solution.pi;
  const double n = config.num_stations;

  ThroughputReport r;
  r.p_tr = 1.0 - std::pow(1.0 - pi, n);
  r.p_s = r.p_tr > 0.0 ? n * pi * std::pow(1.0 - pi, n - 1.0) / r.p_tr : 0.0;
  r.expected_slot = r.p_s * r.p_tr * d.t_success + r.p_tr * (1.0 - r.p_s) * d.t_collision +
                    (1.0 - r.p_tr) * d.t_idle;
  r.tau = r.expected_slot > 0.0 ? r.p_s * r.p_tr * phy.payload_bits / r.expected_slot : 0.0;
  return r;
}

std::vector<SweepRow> sweep(const MacConfig& config_template, const PhyParameters& phy,
                            const SweepGrid& grid, AnalyticPath path, unsigned jobs) {
  if (grid.strategies.empty() || grid.num_stations.empty() || grid.max_stages.empty()) {
    throw std::invalid_argument("sweep grid axes must be non-empty");
  }
  std::vector<SweepRow> rows;
  rows.reserve(grid.strategies.size() * grid.num_stations.size() * grid.max_stages.size());
  for (Strategy s : grid.strategies) {
    for (std::uint32_t m : grid.max_stages) {
      for (std::uint32_t n : grid.num_stations) {
        SweepRow& row = rows.emplace_back();
        row.strategy = s;
        row.num_stations = n;
        row.max_stage = m;
        row.min_window = config_template.min_window;
      }
    }
  }

  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    SweepRow& row = rows[i];
    MacConfig config = config_template;
    config.strategy = row.strategy;
    config.num_stations = row.num_stations;
    config.max_stage = row.max_stage;
    try {
      auto solution = solve_fixed_point(config, path);
      row.report = throughput(solution, config, phy);
      row.solution = std::move(solution);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

double AuditRow::closed_form_error() const { return std::abs(closed_form_pi - oracle_pi); }
double AuditRow::chain_error() const { return std::abs(chain_pi - oracle_pi); }

std::vector<AuditRow> formula_audit(std::span<const Strategy> strategies,
                                    std::span<const std::uint32_t> max_stages,
                                    std::span<const double> p_grid, std::uint32_t w,
                                    unsigned jobs) {
  std::vector<AuditRow> rows;
  for (Strategy s : strategies) {
    for (std::uint32_t m : max_stages) {
      for (double p : p_grid) {
        AuditRow row;
        row.strategy = s;
        row.max_stage = m;
        row.min_window = w;
        row.p = p;
        rows.push_back(row);
      }
    }
  }
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    AuditRow& row = rows[i];
    row.closed_form_pi = transmission_prob(row.strategy, AnalyticPath::PublishedClosedForm,
                                           row.p, row.max_stage, w);
    row.chain_pi =
        transmission_prob(row.strategy, AnalyticPath::ChainExact, row.p, row.max_stage, w);
    const auto oracle = stationary_oracle(row.strategy, row.p, row.max_stage, w);
    row.oracle_pi = oracle.pi;
    row.oracle_iterations = oracle.iterations;
  });
  return rows;
}

}  // namespace csma::analytic
