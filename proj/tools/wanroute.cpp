// wanroute: experiment runner for long-flow routing on slotted WAN models.
//
//   wanroute simulate --topology ans --scheme bwrh,minhop --policy srpt --slots 500
//   wanroute gap      --topology gscale,agis,ans --arrivals 1000
//   wanroute latency  --topology gscale --lambdas 1,10 --mus 5,50
//   wanroute topo     ans
//   wanroute trace export --topology ans --slots 500 --out trace.csv
//   wanroute trace replay --trace trace.csv --topology ans --scheme bwrh
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wanroute/error.hpp"
#include "wanroute/experiments.hpp"
#include "wanroute/gml.hpp"

namespace {

using namespace wanroute;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct TrafficFlags {
  double lambda = 1.0;
  double mu = 50.0;
  std::string dist = "exp";
  Units max_size = 500;
  std::size_t arrivals = 0;
  Slot slots = 0;
};

void add_traffic_flags(CLI::App& cmd, TrafficFlags& flags) {
  cmd.add_option("--lambda", flags.lambda, "Mean flow arrivals per slot")->capture_default_str();
  cmd.add_option("--mu", flags.mu, "Mean flow size in data units")->capture_default_str();
  cmd.add_option("--dist", flags.dist, "Flow size distribution: exp or pareto")
      ->capture_default_str();
  cmd.add_option("--max-size", flags.max_size, "Largest flow size")->capture_default_str();
  cmd.add_option("--arrivals", flags.arrivals, "Stop generating after this many arrivals");
  cmd.add_option("--slots", flags.slots, "Simulated horizon in slots");
}

TrafficConfig to_traffic(const TrafficFlags& flags) {
  TrafficConfig t;
  t.lambda = flags.lambda;
  t.mu = flags.mu;
  t.dist = parse_distribution(flags.dist);
  t.max_size = flags.max_size;
  return t;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

void print_simulation_table(const nlohmann::json& report) {
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> normalized;
  for (const auto& n : report["normalized"]) {
    normalized[{n["scheme"], n["policy"]}] = {n["mean_fct"], n["p99_fct"]};
  }
  std::printf("%-8s %-6s %16s %16s %12s %8s %8s\n", "scheme", "policy", "mean_fct", "p99_fct",
              "incomplete", "norm_m", "norm_99");
  for (const auto& s : report["summary"]) {
    const std::string scheme = s["scheme"];
    const std::string policy = s["policy"];
    const auto it = normalized.find({scheme, policy});
    std::printf("%-8s %-6s %9.2f ±%6.2f %9.2f ±%6.2f %12.1f %8.3f %8.3f\n", scheme.c_str(),
                policy.c_str(), s["mean_fct"]["mean"].get<double>(),
                s["mean_fct"]["stddev"].get<double>(), s["p99_fct"]["mean"].get<double>(),
                s["p99_fct"]["stddev"].get<double>(), s["incomplete"]["mean"].get<double>(),
                it == normalized.end() ? 0.0 : it->second.first,
                it == normalized.end() ? 0.0 : it->second.second);
  }
}

int do_simulate(SimConfig cfg, const std::string& out_prefix) {
  const Topology topo = load_topology(cfg.topology);
  const auto result = run_simulation(cfg, topo);
  {
    auto csv = open_output(out_prefix + ".flows.csv");
    write_flows_csv(csv, result);
  }
  const auto report = simulation_report(result);
  {
    auto json = open_output(out_prefix + ".report.json");
    json << report.dump(2) << '\n';
  }
  print_simulation_table(report);
  std::printf("wrote %s.flows.csv and %s.report.json\n", out_prefix.c_str(), out_prefix.c_str());
  return 0;
}

template <typename T, typename Parse>
std::vector<T> parse_all(const std::vector<std::string>& names, Parse parse) {
  std::vector<T> out;
  for (const auto& n : names) out.push_back(parse(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-flow routing and scheduling experiments on slotted WAN models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values; flags override it");

  // simulate / trace replay share the same settings.
  SimConfig sim;
  sim.seed = default_seed();
  TrafficFlags sim_traffic;
  std::vector<std::string> schemes{"bwrh"};
  std::vector<std::string> policies{"fcfs"};
  std::string out_prefix = "wanroute";
  std::string trace_file;

  auto add_sim_flags = [&](CLI::App& cmd) {
    cmd.add_option("--topology", sim.topology, "Builtin name or GML/edge-list file")
        ->capture_default_str();
    cmd.add_option("--scheme", schemes, "bwrh, minhop, minmax, random (comma list)")
        ->delimiter(',')
        ->capture_default_str();
    cmd.add_option("--policy", policies, "fcfs, srpt, fair (comma list)")
        ->delimiter(',')
        ->capture_default_str();
    cmd.add_option("--replicas", sim.replicas, "Independent replicas")->capture_default_str();
    cmd.add_option("--seed", sim.seed, "Base seed (default from WANROUTE_SEED)")
        ->capture_default_str();
    cmd.add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
    cmd.add_option("--out", out_prefix, "Output prefix for .flows.csv and .report.json")
        ->capture_default_str();
  };

  auto* simulate = app.add_subcommand("simulate", "Run schemes x policies over seeded traffic");
  add_sim_flags(*simulate);
  add_traffic_flags(*simulate, sim_traffic);
  simulate->add_flag("--drain", sim.drain, "Run past --slots until every flow finishes");
  simulate->add_option("--trace", trace_file, "Replay this trace instead of generating traffic");

  // gap
  GapConfig gap;
  std::vector<std::string> gap_dists{"exp", "pareto"};
  double gap_timeout = 60.0;
  std::string gap_out = "gap.json";
  gap.seeds = {default_seed()};
  auto* gap_cmd = app.add_subcommand("gap", "BWRH optimality gap against the exact oracle");
  gap_cmd->add_option("--topology", gap.topologies, "Topologies (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  gap_cmd->add_option("--dist", gap_dists, "Size distributions (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  gap_cmd->add_option("--lambda", gap.lambda, "Mean arrivals per slot")->capture_default_str();
  gap_cmd->add_option("--mu", gap.mu, "Mean flow size")->capture_default_str();
  gap_cmd->add_option("--arrivals", gap.arrivals, "Arrivals per cell")->capture_default_str();
  gap_cmd->add_option("--seeds", gap.seeds, "Seeds (comma list)")->delimiter(',');
  std::string gap_policy = "fcfs";
  gap_cmd->add_option("--policy", gap_policy, "Scheduling policy while the network evolves")
      ->capture_default_str();
  gap_cmd->add_option("--timeout", gap_timeout, "Oracle time budget per arrival, seconds")
      ->capture_default_str();
  gap_cmd->add_flag("--raw-oracle", gap.raw_oracle, "Enumerate every path instead of pruning");
  gap_cmd->add_flag("--force", gap.force, "Run even where the path-count guard refuses");
  gap_cmd->add_option("--path-guard", gap.path_guard, "Simple-path count that trips the guard")
      ->capture_default_str();
  gap_cmd->add_option("--threads", gap.threads, "Worker threads (0 = all cores)");
  gap_cmd->add_option("--out", gap_out, "JSON report path")->capture_default_str();

  // latency
  LatencyConfig lat;
  lat.seed = default_seed();
  std::vector<std::string> lat_dists{"exp", "pareto"};
  std::vector<std::string> lat_policies{"fcfs", "srpt", "fair"};
  std::string lat_out = "latency.json";
  auto* lat_cmd = app.add_subcommand("latency", "Wall-clock cost of BWRH over a load sweep");
  lat_cmd->add_option("--topology", lat.topologies, "Topologies (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  lat_cmd->add_option("--dist", lat_dists, "Size distributions")->delimiter(',');
  lat_cmd->add_option("--policy", lat_policies, "Scheduling policies")->delimiter(',');
  lat_cmd->add_option("--lambdas", lat.lambdas, "Arrival rates")->delimiter(',');
  lat_cmd->add_option("--mus", lat.mus, "Mean flow sizes")->delimiter(',');
  lat_cmd->add_option("--arrivals", lat.arrivals, "Arrivals per point")->capture_default_str();
  lat_cmd->add_option("--seed", lat.seed, "Base seed");
  lat_cmd->add_option("--threads", lat.threads, "Worker threads (0 = all cores)");
  lat_cmd->add_option("--out", lat_out, "JSON report path")->capture_default_str();

  // topo
  std::string topo_name;
  auto* topo_cmd = app.add_subcommand("topo", "Summarise a topology");
  topo_cmd->add_option("topology", topo_name, "Builtin name or GML/edge-list file")->required();

  // trace export / replay
  auto* trace_cmd = app.add_subcommand("trace", "Export or replay arrival traces");
  trace_cmd->require_subcommand(1);
  std::string export_topology = "ans";
  std::string export_out;
  TrafficFlags export_traffic;
  std::uint64_t export_seed = default_seed();
  auto* export_cmd = trace_cmd->add_subcommand("export", "Write a seeded arrival trace as CSV");
  export_cmd->add_option("--topology", export_topology, "Topology the trace is drawn on")
      ->capture_default_str();
  add_traffic_flags(*export_cmd, export_traffic);
  export_cmd->add_option("--seed", export_seed, "Traffic seed");
  export_cmd->add_option("--out", export_out, "Output file (stdout when omitted)");

  auto* replay_cmd = trace_cmd->add_subcommand("replay", "Simulate a recorded trace");
  add_sim_flags(*replay_cmd);
  replay_cmd->add_option("--trace", trace_file, "Trace CSV")->required();
  replay_cmd->add_option("--slots", sim_traffic.slots, "Simulated horizon in slots");
  replay_cmd->add_flag("--drain", sim.drain, "Run past --slots until every flow finishes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate || *replay_cmd) {
      sim.schemes = parse_all<Scheme>(schemes, parse_scheme);
      sim.policies = parse_all<Policy>(policies, parse_policy);
      if (*simulate) sim.traffic = to_traffic(sim_traffic);
      if (sim_traffic.arrivals > 0) sim.arrivals = sim_traffic.arrivals;
      if (sim_traffic.slots > 0) sim.slots = sim_traffic.slots;
      if (!trace_file.empty()) sim.trace_file = trace_file;
      validate(sim);
      return do_simulate(sim, out_prefix);
    }
    if (*gap_cmd) {
      gap.dists = parse_all<SizeDistribution>(gap_dists, parse_distribution);
      gap.policy = parse_policy(gap_policy);
      gap.oracle_timeout = std::chrono::duration<double>(gap_timeout);
      const auto result = run_gap(gap);
      std::printf("%-10s %-7s %6s %10s %10s %12s %12s %9s %8s\n", "topology", "dist", "seed",
                  "evaluated", "unbounded", "mean_gap", "finite_mean", "timeouts", "seconds");
      for (const auto& c : result.cells) {
        std::printf("%-10s %-7s %6llu %10zu %10zu %12.6f %12.6f %9zu %8.1f\n",
                    c.topology.c_str(), std::string(to_string(c.dist)).c_str(),
                    static_cast<unsigned long long>(c.seed), c.gaps.size(), c.unbounded_count,
                    c.mean_gap, c.finite_mean_gap, c.timeouts, c.seconds);
      }
      auto out = open_output(gap_out);
      out << to_json(result).dump(2) << '\n';
      std::printf("wrote %s\n", gap_out.c_str());
      return 0;
    }
    if (*lat_cmd) {
      lat.dists = parse_all<SizeDistribution>(lat_dists, parse_distribution);
      lat.policies = parse_all<Policy>(lat_policies, parse_policy);
      const auto result = run_latency(lat);
      std::map<std::string, double> per_topology;
      for (const auto& p : result.points) {
        per_topology[p.topology] = std::max(per_topology[p.topology], p.max_ms);
      }
      std::printf("%-12s %14s\n", "topology", "max_ms");
      for (const auto& [name, ms] : per_topology) std::printf("%-12s %14.3f\n", name.c_str(), ms);
      std::printf("overall max %.3f ms, mean of per-point max %.3f ms over %zu points\n",
                  result.max_ms, result.mean_of_max_ms, result.points.size());
      auto out = open_output(lat_out);
      out << to_json(result).dump(2) << '\n';
      std::printf("wrote %s\n", lat_out.c_str());
      return 0;
    }
    if (*topo_cmd) {
      std::cout << format_summary(summarize_topology(load_topology(topo_name)));
      return 0;
    }
    if (*export_cmd) {
      const Topology topo = load_topology(export_topology);
      TrafficConfig traffic = to_traffic(export_traffic);
      traffic.seed = export_seed;
      ArrivalStop stop;
      if (export_traffic.arrivals > 0) stop.max_arrivals = export_traffic.arrivals;
      if (export_traffic.slots > 0) stop.horizon = export_traffic.slots;
      if (!stop.max_arrivals && !stop.horizon) throw ConfigError("give --arrivals and/or --slots");
      const auto events = gen_arrivals(traffic, topo.node_count(), stop);
      std::ostringstream comment;
      comment << "topology=" << topo.name() << " lambda=" << traffic.lambda
              << " mu=" << traffic.mu << " dist=" << to_string(traffic.dist)
              << " max_size=" << traffic.max_size << " seed=" << traffic.seed;
      if (export_out.empty()) {
        write_trace(std::cout, events, comment.str());
      } else {
        auto out = open_output(export_out);
        write_trace(out, events, comment.str());
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
