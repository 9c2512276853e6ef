#include "cli.hpp"

#include <fmt/core.h>

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "csma/analytic.hpp"
#include "csma/config.hpp"
#include "csma/parallel.hpp"
#include "csma/simulator.hpp"
#include "csma/stats.hpp"
#include "grid.hpp"

namespace csma::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Table rows in the order the delay tables list them.
constexpr double kDelayQuantiles[] = {0.99, 0.98, 0.95, 0.90};

std::string num(double v) { return fmt::format("{:.12g}", v); }

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::string strategy;
  std::string n_grid;
  std::string m_grid;
  std::optional<std::uint32_t> w;
  std::uint64_t slots = 1'000'000;
  std::uint64_t warmup = 10'000;
  std::uint32_t runs = 1;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  bool freeze_on_busy = false;
  bool gnuplot = false;
  std::string path;
  bool audit = false;
};

/// Fully resolved inputs of one invocation.
struct Plan {
  PhyParameters phy;
  MacConfig mac;
  std::vector<Strategy> strategies;
  std::vector<std::uint32_t> n_values;
  std::vector<std::uint32_t> m_values;
  analytic::AnalyticPath path = analytic::AnalyticPath::PublishedClosedForm;
  fs::path out;
};

struct Defaults {
  const char* strategy;
  const char* n;
  const char* m;
  analytic::AnalyticPath path;
};

Plan resolve(const Options& o, const Defaults& d) {
  ScenarioConfig file;
  if (!o.config_path.empty()) file = load_config(o.config_path);

  Plan plan;
  plan.phy = file.phy;
  plan.mac = file.mac;
  if (o.w) plan.mac.min_window = *o.w;

  const std::string strategy =
      !o.strategy.empty() ? o.strategy
      : file.has("mac.strategy") ? std::string(to_string(file.mac.strategy))
                                 : d.strategy;
  if (strategy == "both") {
    plan.strategies = {Strategy::Proposed, Strategy::Classical};
  } else {
    try {
      plan.strategies = {parse_strategy(strategy)};
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  plan.n_values = !o.n_grid.empty()                ? parse_grid(o.n_grid)
                  : file.has("mac.num_stations") ? std::vector{file.mac.num_stations}
                                                   : parse_grid(d.n);
  plan.m_values = !o.m_grid.empty()             ? parse_grid(o.m_grid)
                  : file.has("mac.max_stage") ? std::vector{file.mac.max_stage}
                                                : parse_grid(d.m);
  plan.path = d.path;
  if (!o.path.empty()) {
    try {
      plan.path = analytic::parse_path(o.path);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  for (auto n : plan.n_values) {
    if (n < 1) throw UsageError("--n values must be >= 1");
  }
  for (auto m : plan.m_values) {
    MacConfig probe = plan.mac;
    probe.max_stage = m;
    try {
      probe.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  try {
    plan.mac.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  plan.out = o.out_dir;
  std::error_code ec;
  fs::create_directories(plan.out, ec);
  if (ec) throw IoError("cannot create output directory '" + o.out_dir + "': " + ec.message());
  return plan;
}

class CsvFile {
 public:
  CsvFile(const fs::path& path, std::string_view header) : out_(path) {
    if (!out_) throw IoError("cannot write '" + path.string() + "'");
    out_ << header << '\n';
  }
  template <typename... Args>
  void row(fmt::format_string<Args...> f, Args&&... args) {
    out_ << fmt::format(f, std::forward<Args>(args)...) << '\n';
  }

 private:
  std::ofstream out_;
};

void write_run_info(const Plan& plan, const Options& o, std::string_view command,
                    bool simulated) {
  json info;
  info["command"] = command;
  json strategies = json::array();
  for (auto s : plan.strategies) strategies.push_back(to_string(s));
  info["strategies"] = strategies;
  info["n"] = plan.n_values;
  info["m"] = plan.m_values;
  info["min_window"] = plan.mac.min_window;
  info["analytic_path"] = analytic::to_string(plan.path);
  if (simulated) {
    info["rng"] = sim::kEngineName;
    info["seed"] = o.seed;
    info["measured_slots"] = o.slots;
    info["warmup_slots"] = o.warmup;
    info["runs"] = o.runs;
    info["freeze_on_busy"] = o.freeze_on_busy;
  }
  const auto& phy = plan.phy;
  info["phy"] = {{"payload_bits", phy.payload_bits},
                 {"mac_header_bits", phy.mac_header_bits},
                 {"phy_header_bits", phy.phy_header_bits},
                 {"ack_bits", phy.ack_bits},
                 {"rts_bits", phy.rts_bits},
                 {"cts_bits", phy.cts_bits},
                 {"bit_rate", phy.bit_rate},
                 {"propagation_delay", phy.propagation_delay},
                 {"sifs", phy.sifs},
                 {"slot_time", phy.slot_time},
                 {"difs", phy.difs}};
  std::ofstream out(plan.out / "run_info.json");
  if (!out) throw IoError("cannot write run_info.json");
  out << info.dump(2) << '\n';
}

sim::SimConfig sim_config(const Plan& plan, const Options& o, Strategy s, std::uint32_t n,
                          std::uint32_t m, bool record_delays) {
  sim::SimConfig c;
  c.mac = plan.mac;
  c.mac.strategy = s;
  c.mac.num_stations = n;
  c.mac.max_stage = m;
  c.phy = plan.phy;
  c.warmup_slots = o.warmup;
  c.num_virtual_slots = o.warmup + o.slots;
  c.seed = o.seed;
  c.freeze_on_busy = o.freeze_on_busy;
  c.record_delays = record_delays;
  if (o.slots == 0) throw UsageError("--slots must be >= 1");
  return c;
}

struct SimPoint {
  Strategy strategy;
  std::uint32_t n;
  std::uint32_t m;
};

std::vector<SimPoint> sim_points(const Plan& plan) {
  std::vector<SimPoint> points;
  for (auto s : plan.strategies)
    for (auto m : plan.m_values)
      for (auto n : plan.n_values) points.push_back({s, n, m});
  return points;
}

// ---------------------------------------------------------------------------

int cmd_analytic(const Options& o) {
  const Plan plan = resolve(o, {"both", "1..50", "3,5,7", analytic::AnalyticPath::PublishedClosedForm});
  const auto rows = analytic::sweep(plan.mac, plan.phy,
                                    {plan.strategies, plan.n_values, plan.m_values},
                                    plan.path, o.jobs);

  int status = kOk;
  CsvFile csv(plan.out / "analytic.csv",
              "strategy,N,m,W,p,pi,b00,P_tr,P_s,tau_bps,expected_slot_s,residual");
  for (const auto& r : rows) {
    if (!r.ok()) {
      fmt::print(stderr, "error: {} N={} m={}: {}\n", to_string(r.strategy), r.num_stations,
                 r.max_stage, r.error);
      status = kNumerical;
      continue;
    }
    const auto& s = *r.solution;
    const auto& t = *r.report;
    csv.row("{},{},{},{},{},{},{},{},{},{},{},{}", to_string(r.strategy), r.num_stations,
            r.max_stage, r.min_window, num(s.p), num(s.pi), num(s.b00), num(t.p_tr),
            num(t.p_s), num(t.tau), num(t.expected_slot), num(s.residual));
    fmt::print("{:9s} N={:<4} m={:<2} p={:.6f} pi={:.6f} tau={:.1f} bit/s\n",
               to_string(r.strategy), r.num_stations, r.max_stage, s.p, s.pi, t.tau);
  }

  if (o.gnuplot) {
    for (auto strategy : plan.strategies) {
      for (auto m : plan.m_values) {
        CsvFile dat(plan.out / fmt::format("analytic_{}_m{}.dat", to_string(strategy), m),
                    "# N tau_bps");
        for (const auto& r : rows) {
          if (r.ok() && r.strategy == strategy && r.max_stage == m) {
            dat.row("{} {}", r.num_stations, num(r.report->tau));
          }
        }
      }
    }
  }

  if (o.audit) {
    std::vector<double> p_grid;
    for (int i = 0; i <= 9; ++i) p_grid.push_back(i / 10.0);
    const auto audit = analytic::formula_audit(plan.strategies, plan.m_values, p_grid,
                                               plan.mac.min_window, o.jobs);
    CsvFile csv_audit(plan.out / "formula_audit.csv",
                      "strategy,m,W,p,closed_form_pi,chain_pi,oracle_pi,closed_form_abs_err,"
                      "chain_abs_err,oracle_iterations");
    double worst_closed = 0.0;
    double worst_chain = 0.0;
    for (const auto& a : audit) {
      csv_audit.row("{},{},{},{},{},{},{},{},{},{}", to_string(a.strategy), a.max_stage,
                    a.min_window, num(a.p), num(a.closed_form_pi), num(a.chain_pi),
                    num(a.oracle_pi), num(a.closed_form_error()), num(a.chain_error()),
                    a.oracle_iterations);
      worst_closed = std::max(worst_closed, a.closed_form_error());
      worst_chain = std::max(worst_chain, a.chain_error());
    }
    fmt::print("formula audit: max |closed form - oracle| = {:.3e}, max |chain - oracle| = {:.3e}\n",
               worst_closed, worst_chain);
  }

  write_run_info(plan, o, "analytic", false);
  return status;
}

int cmd_simulate(const Options& o) {
  const Plan plan = resolve(o, {"both", "50", "3", analytic::AnalyticPath::PublishedClosedForm});
  if (o.runs < 1) throw UsageError("--runs must be >= 1");
  const auto points = sim_points(plan);

  CsvFile csv(plan.out / "metrics.csv",
              "strategy,N,m,W,seed,slots,idle,success,collision,sim_time_s,throughput_bps");
  for (const auto& pt : points) {
    const auto config = sim_config(plan, o, pt.strategy, pt.n, pt.m, true);
    const auto runs = sim::replicate(config, o.runs, o.seed, o.jobs);
    for (std::uint32_t r = 0; r < runs.size(); ++r) {
      const auto& x = runs[r];
      const std::uint64_t seed = o.seed + r;
      csv.row("{},{},{},{},{},{},{},{},{},{},{}", to_string(pt.strategy), pt.n, pt.m,
              plan.mac.min_window, seed, x.measured_slots(), x.idle_slots, x.success_slots,
              x.collision_slots, num(x.sim_time), num(x.throughput_bps));
      CsvFile delays(plan.out / fmt::format("delays_{}_N{}_m{}_seed{}.csv",
                                            to_string(pt.strategy), pt.n, pt.m, seed),
                     "delay_s");
      for (double d : x.delay_samples) delays.row("{}", num(d));
      fmt::print("{:9s} N={:<4} m={:<2} seed={:<4} throughput={:.1f} bit/s packets={}\n",
                 to_string(pt.strategy), pt.n, pt.m, seed, x.throughput_bps, x.success_slots);
    }
  }
  write_run_info(plan, o, "simulate", true);
  return kOk;
}

int cmd_validate(const Options& o) {
  const Plan plan =
      resolve(o, {"proposed", "5,10,20,50", "3,7", analytic::AnalyticPath::ChainExact});
  const auto points = sim_points(plan);

  struct Result {
    double analytic_tau = 0.0;
    double simulated_tau = 0.0;
  };
  std::vector<Result> results(points.size());
  parallel_for(points.size(), o.jobs, [&](std::size_t i) {
    const auto& pt = points[i];
    const auto config = sim_config(plan, o, pt.strategy, pt.n, pt.m, false);
    const auto solution = analytic::solve_fixed_point(config.mac, plan.path);
    results[i].analytic_tau = analytic::throughput(solution, config.mac, plan.phy).tau;
    results[i].simulated_tau = sim::run(config).throughput_bps;
  });

  CsvFile csv(plan.out / "validation.csv",
              "strategy,N,m,W,seed,analytic_tau_bps,simulated_tau_bps,relative_error");
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    const double err = stats::relative_error(results[i].simulated_tau, results[i].analytic_tau);
    worst = std::max(worst, err);
    csv.row("{},{},{},{},{},{},{},{}", to_string(pt.strategy), pt.n, pt.m, plan.mac.min_window,
            o.seed, num(results[i].analytic_tau), num(results[i].simulated_tau), num(err));
    fmt::print("{:9s} N={:<4} m={:<2} analytic={:.1f} simulated={:.1f} rel.err={:.4f}%\n",
               to_string(pt.strategy), pt.n, pt.m, results[i].analytic_tau,
               results[i].simulated_tau, 100.0 * err);
  }
  fmt::print("max relative error: {:.6f}\n", worst);

  if (o.gnuplot) {
    for (auto strategy : plan.strategies) {
      for (auto m : plan.m_values) {
        CsvFile dat(plan.out / fmt::format("validation_{}_m{}.dat", to_string(strategy), m),
                    "# N relative_error");
        for (std::size_t i = 0; i < points.size(); ++i) {
          if (points[i].strategy == strategy && points[i].m == m) {
            dat.row("{} {}", points[i].n,
                    num(stats::relative_error(results[i].simulated_tau,
                                              results[i].analytic_tau)));
          }
        }
      }
    }
  }
  write_run_info(plan, o, "validate", true);
  return kOk;
}

stats::Ecdf pooled_delays(const std::vector<sim::SimMetrics>& runs) {
  std::vector<double> all;
  for (const auto& r : runs) all.insert(all.end(), r.delay_samples.begin(), r.delay_samples.end());
  if (all.empty()) throw analytic::NumericalError("no packet was delivered", 0.0);
  return stats::Ecdf(std::move(all));
}

int cmd_delay_cdf(const Options& o) {
  Options forced = o;
  forced.strategy = "both";
  const Plan plan = resolve(forced, {"both", "50", "3,7", analytic::AnalyticPath::PublishedClosedForm});
  if (o.runs < 1) throw UsageError("--runs must be >= 1");

  CsvFile quantiles(plan.out / "quantiles.csv", "strategy,N,m,q,delay_s");
  for (auto m : plan.m_values) {
    for (auto n : plan.n_values) {
      std::vector<stats::Ecdf> ecdfs;
      for (auto s : plan.strategies) {
        const auto config = sim_config(plan, o, s, n, m, true);
        ecdfs.push_back(pooled_delays(sim::replicate(config, o.runs, o.seed, o.jobs)));
      }
      const stats::Ecdf& proposed = ecdfs[0];
      const stats::Ecdf& classical = ecdfs[1];

      for (std::size_t k = 0; k < plan.strategies.size(); ++k) {
        for (double q : kDelayQuantiles) {
          quantiles.row("{},{},{},{},{}", to_string(plan.strategies[k]), n, m, num(q),
                        num(ecdfs[k].quantile(q)));
        }
      }
      CsvFile gain(plan.out / fmt::format("gain_N{}_m{}.csv", n, m),
                   "q,proposed_ms,classical_ms,gain_pct");
      fmt::print("N={} m={} ({} + {} packets)\n", n, m, proposed.size(), classical.size());
      for (double q : kDelayQuantiles) {
        const double a = proposed.quantile(q) * 1e3;
        const double b = classical.quantile(q) * 1e3;
        const double g = stats::gain_percent(a, b);
        gain.row("{},{},{},{}", num(q), num(a), num(b), num(g));
        fmt::print("  q={:.2f} proposed={:.3f} ms classical={:.3f} ms gain={:.2f}%\n", q, a, b, g);
      }

      if (o.gnuplot) {
        for (std::size_t k = 0; k < plan.strategies.size(); ++k) {
          CsvFile dat(plan.out / fmt::format("cdf_{}_N{}_m{}.dat",
                                             to_string(plan.strategies[k]), n, m),
                      "# delay_s cdf");
          const auto samples = ecdfs[k].samples();
          const std::size_t step = std::max<std::size_t>(1, samples.size() / 1000);
          for (std::size_t i = step - 1; i < samples.size(); i += step) {
            dat.row("{} {}", num(samples[i]),
                    num(static_cast<double>(i + 1) / static_cast<double>(samples.size())));
          }
        }
      }
    }
  }
  write_run_info(plan, o, "delay-cdf", true);
  return kOk;
}

int cmd_occupancy(const Options& o) {
  const Plan plan = resolve(o, {"both", "50", "7", analytic::AnalyticPath::ChainExact});
  const auto points = sim_points(plan);

  struct Result {
    sim::SimMetrics metrics;
    analytic::FixedPointSolution solution;
  };
  std::vector<Result> results(points.size());
  parallel_for(points.size(), o.jobs, [&](std::size_t i) {
    const auto config = sim_config(plan, o, points[i].strategy, points[i].n, points[i].m, false);
    results[i].metrics = sim::run(config);
    results[i].solution = analytic::solve_fixed_point(config.mac, plan.path);
  });

  CsvFile csv(plan.out / "occupancy.csv",
              "strategy,N,m,W,seed,stage,attempts,sim_fraction,analytic_fraction");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    const auto& hist = results[i].metrics.stage_tx_histogram;
    const auto& sol = results[i].solution;
    std::uint64_t total = 0;
    for (auto c : hist) total += c;
    for (std::uint32_t stage = 0; stage < hist.size(); ++stage) {
      const double sim_frac =
          total ? static_cast<double>(hist[stage]) / static_cast<double>(total) : 0.0;
      csv.row("{},{},{},{},{},{},{},{},{}", to_string(pt.strategy), pt.n, pt.m,
              plan.mac.min_window, o.seed, stage, hist[stage], num(sim_frac),
              num(sol.stage_occupancy[stage] / sol.pi));
    }
    const double stage0 =
        total ? static_cast<double>(hist[0]) / static_cast<double>(total) : 0.0;
    fmt::print("{:9s} N={:<4} m={:<2} attempts={} stage-0 share={:.4f}\n",
               to_string(pt.strategy), pt.n, pt.m, total, stage0);

    if (o.gnuplot) {
      CsvFile dat(plan.out / fmt::format("occupancy_{}_N{}_m{}.dat", to_string(pt.strategy),
                                         pt.n, pt.m),
                  "# stage sim_fraction analytic_fraction");
      for (std::uint32_t stage = 0; stage < hist.size(); ++stage) {
        dat.row("{} {} {}", stage,
                num(total ? static_cast<double>(hist[stage]) / static_cast<double>(total) : 0.0),
                num(sol.stage_occupancy[stage] / sol.pi));
      }
    }
  }
  write_run_info(plan, o, "occupancy", true);
  return kOk;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config_path, "Scenario file with [phy] and [mac] sections");
  app->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  app->add_option("--strategy", o.strategy, "proposed | classical | both")
      ->check(CLI::IsMember({"proposed", "classical", "both"}));
  app->add_option("--n", o.n_grid, "Station counts, e.g. 5..50 or 5,10,20");
  app->add_option("--m", o.m_grid, "Maximum backoff stages, e.g. 3,5,7");
  app->add_option("--w", o.w, "Minimum contention window (default 16)");
  app->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  app->add_flag("--gnuplot", o.gnuplot, "Also write whitespace-separated .dat files");
}

void add_sim(CLI::App* app, Options& o) {
  app->add_option("--slots", o.slots, "Measured virtual slots per run")->capture_default_str();
  app->add_option("--warmup", o.warmup, "Discarded warm-up slots per run")->capture_default_str();
  app->add_option("--seed", o.seed, "Seed of the first run")->capture_default_str();
  app->add_flag("--freeze-on-busy", o.freeze_on_busy,
                "Freeze backoff counters during busy slots");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Half-window CSMA/CA backoff: analytic model and slot simulator",
               "csma-backoff"};
  app.require_subcommand(1, 1);
  Options o;

  auto* analytic_cmd = app.add_subcommand("analytic", "Fixed-point sweep and saturation throughput");
  add_common(analytic_cmd, o);
  analytic_cmd->add_option("--path", o.path, "published | chain (default published)");
  analytic_cmd->add_flag("--audit", o.audit,
                         "Compare closed forms with the stationary oracle (formula_audit.csv)");

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo runs with metrics and delays");
  add_common(simulate_cmd, o);
  add_sim(simulate_cmd, o);
  simulate_cmd->add_option("--runs", o.runs, "Replicates per grid point")->capture_default_str();

  auto* validate_cmd = app.add_subcommand("validate", "Relative throughput error, analysis vs simulation");
  add_common(validate_cmd, o);
  add_sim(validate_cmd, o);
  validate_cmd->add_option("--path", o.path, "published | chain (default chain)");

  auto* delay_cmd = app.add_subcommand("delay-cdf", "Pooled access-delay quantiles and gains");
  add_common(delay_cmd, o);
  add_sim(delay_cmd, o);
  delay_cmd->add_option("--runs", o.runs, "Replicates per strategy")->capture_default_str();

  auto* occupancy_cmd = app.add_subcommand("occupancy", "Transmission attempts per backoff stage");
  add_common(occupancy_cmd, o);
  add_sim(occupancy_cmd, o);
  occupancy_cmd->add_option("--path", o.path, "published | chain (default chain)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (analytic_cmd->parsed()) return cmd_analytic(o);
    if (simulate_cmd->parsed()) return cmd_simulate(o);
    if (validate_cmd->parsed()) return cmd_validate(o);
    if (delay_cmd->parsed()) return cmd_delay_cdf(o);
    if (occupancy_cmd->parsed()) return cmd_occupancy(o);
  } catch (const UsageError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kUsage;
  } catch (const sim::EmptyMeasurementError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kUsage;
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfig;
  } catch (const analytic::NumericalError& e) {
    fmt::print(stderr, "numerical failure: {} (residual {:.3e})\n", e.what(), e.residual());
    return kNumerical;
  } catch (const IoError& e) {
    fmt::print(stderr, "i/o error: {}\n", e.what());
    return kIo;
  } catch (const std::exception& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return kNumerical;
  }
  return kUsage;
}

}  // namespace csma::cli
