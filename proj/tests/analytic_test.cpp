#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "csma/analytic.hpp"

namespace csma::analytic {
namespace {

// Golden values from tests/oracles/closed_forms.py (mpmath, 50 digits) and
// tests/oracles/chain_matrix.py (dense numpy stationary solve).
constexpr double kPublishedPiAt02M3 = 0.056680161943319838;
constexpr double kPublishedPiAtHalfM3 = 0.045454545454545455;
constexpr double kPublishedPiAtThirdM3 = 0.052434456928838951;
constexpr double kPublishedPiAtThirdM7 = 0.030299415483717046;
constexpr double kClassicalPiAtHalfM3 = 0.048780487804878049;
constexpr double kClassicalPiAt02M5 = 0.08977176426524046;
constexpr double kChainPiAt02M3 = 0.08478802992521521;
constexpr double kChainPiAt06M3 = 0.025072324011576823;

MacConfig make(Strategy s, std::uint32_t n, std::uint32_t m) {
  MacConfig c;
  c.strategy = s;
  c.num_stations = n;
  c.max_stage = m;
  return c;
}

TEST(CollisionProb, Examples) {
  EXPECT_EQ(collision_prob(0.3, 1), 0.0);
  EXPECT_EQ(collision_prob(0.0, 50), 0.0);
  EXPECT_NEAR(collision_prob(0.1, 3), 0.19, 1e-15);
}

TEST(CollisionProb, DomainErrors) {
  EXPECT_THROW(collision_prob(-0.01, 3), std::domain_error);
  EXPECT_THROW(collision_prob(1.01, 3), std::domain_error);
  EXPECT_THROW(collision_prob(0.2, 0), std::domain_error);
}

TEST(PiProposed, Golden) {
  EXPECT_NEAR(pi_proposed(0.0, 3, 16), 1.0 / 17.0, 1e-15);
  EXPECT_NEAR(pi_proposed(0.2, 3, 16), kPublishedPiAt02M3, 1e-14);
}

TEST(PiProposed, RemovableSingularities) {
  EXPECT_NEAR(pi_proposed(0.5, 3, 16), kPublishedPiAtHalfM3, 1e-14);
  EXPECT_NEAR(pi_proposed(1.0 / 3.0, 3, 16), kPublishedPiAtThirdM3, 1e-14);
  EXPECT_NEAR(pi_proposed(1.0 / 3.0, 7, 16), kPublishedPiAtThirdM7, 1e-14);
  EXPECT_TRUE(std::isfinite(pi_proposed(0.5, 7, 16)));
  // both sides of the switch band
  for (double pole : {0.5, 1.0 / 3.0}) {
    for (double offset : {-3e-6, -9e-7, 9e-7, 3e-6}) {
      const double expected = pole == 0.5 ? kPublishedPiAtHalfM3 : kPublishedPiAtThirdM3;
      EXPECT_NEAR(pi_proposed(pole + offset, 3, 16), expected, 1e-5) << pole + offset;
    }
  }
}

TEST(PiProposed, DomainErrors) {
  EXPECT_THROW(pi_proposed(1.0, 3, 16), std::domain_error);
  EXPECT_THROW(pi_proposed(-1e-9, 3, 16), std::domain_error);
}

TEST(PiClassical, Golden) {
  EXPECT_NEAR(pi_classical(0.0, 3, 16), 2.0 / 17.0, 1e-15);
  EXPECT_NEAR(pi_classical(0.5, 3, 16), kClassicalPiAtHalfM3, 1e-15);
  // the dense least-squares solve is itself only good to ~1e-12
  EXPECT_NEAR(pi_classical(0.2, 5, 16), kClassicalPiAt02M5, 1e-11);
  EXPECT_NEAR(pi_classical(0.5 + 2e-6, 3, 16), kClassicalPiAtHalfM3, 1e-6);
}

TEST(PiProposedChain, Golden) {
  EXPECT_NEAR(pi_proposed_chain(0.0, 3, 16), 2.0 / 17.0, 1e-15);
  EXPECT_NEAR(pi_proposed_chain(0.2, 3, 16), kChainPiAt02M3, 1e-13);
  EXPECT_NEAR(pi_proposed_chain(0.6, 3, 16), kChainPiAt06M3, 1e-13);
}

TEST(SolveFixedPoint, SingleStationHasNoCollisions) {
  for (Strategy s : {Strategy::Proposed, Strategy::Classical}) {
    for (AnalyticPath path : {AnalyticPath::PublishedClosedForm, AnalyticPath::ChainExact}) {
      const auto sol = solve_fixed_point(make(s, 1, 3), path);
      EXPECT_EQ(sol.p, 0.0);
      EXPECT_EQ(sol.residual, 0.0);
    }
  }
}

TEST(SolveFixedPoint, Golden) {
  const auto prop3 = solve_fixed_point(make(Strategy::Proposed, 50, 3));
  EXPECT_NEAR(prop3.p, 0.81944926636641062, 1e-10);
  EXPECT_NEAR(prop3.pi, 0.034330407630402652, 1e-10);

  const auto prop7 = solve_fixed_point(make(Strategy::Proposed, 50, 7));
  EXPECT_NEAR(prop7.p, 0.4389506399619711, 1e-10);
  EXPECT_NEAR(prop7.pi, 0.0117255380504368, 1e-10);

  const auto clas7 = solve_fixed_point(make(Strategy::Classical, 50, 7));
  EXPECT_NEAR(clas7.p, 0.57205236233873402, 1e-10);
  EXPECT_NEAR(clas7.pi, 0.017172363964955577, 1e-10);
}

TEST(SolveFixedPoint, InvariantsOverGrid) {
  for (Strategy s : {Strategy::Proposed, Strategy::Classical}) {
    for (AnalyticPath path : {AnalyticPath::PublishedClosedForm, AnalyticPath::ChainExact}) {
      for (std::uint32_t m = 1; m <= 10; ++m) {
        for (std::uint32_t n = 2; n <= 200; n += 7) {
          const auto sol = solve_fixed_point(make(s, n, m), path);
          SCOPED_TRACE(testing::Message() << to_string(s) << " " << to_string(path)
                                          << " N=" << n << " m=" << m);
          EXPECT_LE(sol.residual, 1e-10);
          EXPECT_NEAR(sol.p, collision_prob(sol.pi, n), 1e-10);
          EXPECT_GE(sol.p, 0.0);
          EXPECT_LT(sol.p, 1.0);
          EXPECT_GT(sol.pi, 0.0);
          EXPECT_LE(sol.pi, 1.0);
          ASSERT_EQ(sol.stage_occupancy.size(), m + 1);
          double sum = 0.0;
          for (double b : sol.stage_occupancy) {
            EXPECT_GE(b, 0.0);
            sum += b;
          }
          EXPECT_NEAR(sum, sol.pi, 1e-12 * sol.pi);
          if (s == Strategy::Proposed) {
            const double ratio = sol.p / (1.0 - sol.p);
            for (std::uint32_t i = 0; i < m; ++i) {
              EXPECT_NEAR(sol.stage_occupancy[i + 1] / sol.stage_occupancy[i], ratio, 1e-9);
            }
          }
        }
      }
    }
  }
}

TEST(SolveFixedPoint, ResidualHasSingleSignChange) {
  for (Strategy s : {Strategy::Proposed, Strategy::Classical}) {
    for (AnalyticPath path : {AnalyticPath::PublishedClosedForm, AnalyticPath::ChainExact}) {
      for (std::uint32_t m : {1u, 3u, 5u, 7u}) {
        for (std::uint32_t n : {2u, 5u, 20u, 50u, 150u}) {
          int changes = 0;
          double prev = -1.0;
          for (int k = 0; k <= 4000; ++k) {
            const double p = k / 4000.0 * (1.0 - 1e-9);
            const double g = p - 1.0 + std::pow(1.0 - transmission_prob(s, path, p, m, 16), n - 1.0);
            if (k > 0 && (g > 0.0) != (prev > 0.0)) ++changes;
            prev = g;
          }
          EXPECT_EQ(changes, 1) << to_string(s) << " N=" << n << " m=" << m;
        }
      }
    }
  }
}

TEST(Throughput, SilentChannel) {
  FixedPointSolution sol;
  sol.pi = 0.0;
  const auto r = throughput(sol, make(Strategy::Proposed, 10, 3), PhyParameters{});
  EXPECT_EQ(r.p_tr, 0.0);
  EXPECT_EQ(r.p_s, 0.0);
  EXPECT_EQ(r.tau, 0.0);
  EXPECT_DOUBLE_EQ(r.expected_slot, 50e-6);
}

TEST(Throughput, LoneAlwaysTransmittingStation) {
  FixedPointSolution sol;
  sol.pi = 1.0;
  const auto r = throughput(sol, make(Strategy::Proposed, 1, 3), PhyParameters{});
  EXPECT_EQ(r.p_tr, 1.0);
  EXPECT_EQ(r.p_s, 1.0);
  EXPECT_NEAR(r.tau, 8184.0 / 9568e-6, 1e-6);
  EXPECT_NEAR(r.tau, 0.8554e6, 0.0001e6);
}

TEST(Throughput, ProposedBeatsClassicalAtLargeStage) {
  const PhyParameters phy;
  const auto pc = make(Strategy::Proposed, 50, 7);
  const auto cc = make(Strategy::Classical, 50, 7);
  const double tau_prop = throughput(solve_fixed_point(pc), pc, phy).tau;
  const double tau_clas = throughput(solve_fixed_point(cc), cc, phy).tau;
  // mpmath golden values
  EXPECT_NEAR(tau_prop, 835093.36719023022, 1e-5);
  EXPECT_NEAR(tau_clas, 829534.25812666031, 1e-5);
  EXPECT_GT(tau_prop, tau_clas);
}

TEST(Sweep, Cardinality) {
  SweepGrid grid{{Strategy::Proposed, Strategy::Classical}, {5, 10}, {3}};
  const auto rows = sweep(MacConfig{}, PhyParameters{}, grid);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].strategy, Strategy::Proposed);
  EXPECT_EQ(rows[0].num_stations, 5u);
  EXPECT_EQ(rows[1].num_stations, 10u);
  EXPECT_EQ(rows[2].strategy, Strategy::Classical);
}

TEST(Sweep, RowMatchesStandaloneSolve) {
  const PhyParameters phy;
  SweepGrid grid{{Strategy::Proposed}, {10, 20, 30}, {3, 5}};
  const auto rows = sweep(MacConfig{}, phy, grid);
  const auto it = std::find_if(rows.begin(), rows.end(), [](const SweepRow& r) {
    return r.num_stations == 20 && r.max_stage == 5;
  });
  ASSERT_NE(it, rows.end());
  const auto config = make(Strategy::Proposed, 20, 5);
  const auto sol = solve_fixed_point(config);
  EXPECT_EQ(it->solution->p, sol.p);
  EXPECT_EQ(it->solution->pi, sol.pi);
  EXPECT_EQ(it->report->tau, throughput(sol, config, phy).tau);
}

TEST(Sweep, ClassicalThroughputFallsWithN) {
  std::vector<std::uint32_t> ns;
  for (std::uint32_t n = 10; n <= 50; ++n) ns.push_back(n);
  SweepGrid grid{{Strategy::Classical}, ns, {3, 5, 7}};
  const auto rows = sweep(MacConfig{}, PhyParameters{}, grid);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].max_stage != rows[i - 1].max_stage) continue;
    EXPECT_LT(rows[i].report->tau, rows[i - 1].report->tau)
        << "m=" << rows[i].max_stage << " N=" << rows[i].num_stations;
  }
}

TEST(Sweep, CapacityBound) {
  const PhyParameters phy;
  const double bound = phy.payload_bits / compute_timing(phy).t_success;
  std::vector<std::uint32_t> ns;
  for (std::uint32_t n = 1; n <= 60; ++n) ns.push_back(n);
  SweepGrid grid{{Strategy::Proposed, Strategy::Classical}, ns, {1, 3, 5, 7}};
  for (auto path : {AnalyticPath::PublishedClosedForm, AnalyticPath::ChainExact}) {
    for (const auto& r : sweep(MacConfig{}, phy, grid, path)) {
      ASSERT_TRUE(r.ok()) << r.error;
      EXPECT_GE(r.report->tau, 0.0);
      EXPECT_LE(r.report->tau, bound);
      EXPECT_LE(r.report->p_s, 1.0);
      EXPECT_LE(r.report->p_tr, 1.0);
    }
  }
}

TEST(Sweep, FailedPointDoesNotAbort) {
  SweepGrid grid{{Strategy::Proposed}, {5}, {0, 3}};
  const auto rows = sweep(MacConfig{}, PhyParameters{}, grid);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].ok());
  EXPECT_FALSE(rows[0].solution.has_value());
  EXPECT_TRUE(rows[1].ok());
}

TEST(Sweep, EmptyAxisRejected) {
  EXPECT_THROW(sweep(MacConfig{}, PhyParameters{}, SweepGrid{{}, {5}, {3}}),
               std::invalid_argument);
}

TEST(Sweep, OrderIndependentOfWorkerCount) {
  std::vector<std::uint32_t> ns;
  for (std::uint32_t n = 2; n <= 40; n += 3) ns.push_back(n);
  SweepGrid grid{{Strategy::Proposed, Strategy::Classical}, ns, {3, 7}};
  const auto serial = sweep(MacConfig{}, PhyParameters{}, grid, AnalyticPath::PublishedClosedForm, 1);
  const auto pooled = sweep(MacConfig{}, PhyParameters{}, grid, AnalyticPath::PublishedClosedForm, 4);
  ASSERT_EQ(serial.size(), pooled.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].num_stations, pooled[i].num_stations);
    EXPECT_EQ(serial[i].report->tau, pooled[i].report->tau);
  }
}

TEST(AnalyticPath, Names) {
  EXPECT_EQ(parse_path("published"), AnalyticPath::PublishedClosedForm);
  EXPECT_EQ(parse_path("chain"), AnalyticPath::ChainExact);
  EXPECT_THROW(parse_path("oracle"), std::invalid_argument);
}

}  // namespace
}  // namespace csma::analytic
