#include "wanroute/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iterator>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "wanroute/error.hpp"

namespace wanroute {
namespace {

// Keeps the routing stream of the random scheme apart from the traffic stream.
constexpr std::uint64_t kRouteSeedSalt = 0x5eed0f0e7a11d00dULL;

/// Runs fn(0..count-1) on up to `threads` workers and rethrows the first
/// exception after all workers have stopped.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

double to_ms(std::chrono::nanoseconds d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

std::vector<std::chrono::nanoseconds> route_latencies(const Engine& engine) {
  std::vector<std::chrono::nanoseconds> out;
  for (const auto& a : engine.admissions()) out.push_back(a.route.stats.elapsed);
  return out;
}

std::vector<ArrivalEvent> load_trace(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open trace file " + file);
  return read_trace(in);
}

/// JSON has no infinity; unbounded gaps are written as the string "inf".
nlohmann::json finite_or_inf(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf");
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("WANROUTE_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const auto value = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0') return value;
  }
  return 1;
}

// ---------------------------------------------------------------- simulate --

void validate(const SimConfig& cfg) {
  if (cfg.schemes.empty()) throw ConfigError("at least one scheme is required");
  if (cfg.policies.empty()) throw ConfigError("at least one policy is required");
  if (cfg.replicas < 1) throw ConfigError("replicas must be at least 1");
  if (!cfg.trace_file && !cfg.arrivals && !cfg.slots) {
    throw ConfigError("give --arrivals and/or --slots (or a trace to replay)");
  }
  if (cfg.slots && *cfg.slots <= 0) throw ConfigError("slots must be positive");
  if (cfg.arrivals && *cfg.arrivals == 0) throw ConfigError("arrivals must be positive");
  if (!cfg.trace_file) validate(cfg.traffic);
}

nlohmann::json to_json(const SimConfig& cfg) {
  nlohmann::json schemes = nlohmann::json::array();
  for (auto s : cfg.schemes) schemes.push_back(to_string(s));
  nlohmann::json policies = nlohmann::json::array();
  for (auto p : cfg.policies) policies.push_back(to_string(p));
  nlohmann::json replica_seeds = nlohmann::json::array();
  for (std::size_t r = 0; r < cfg.replicas; ++r) replica_seeds.push_back(replica_seed(cfg.seed, r));
  return {
      {"topology", cfg.topology},
      {"schemes", schemes},
      {"policies", policies},
      {"lambda", cfg.traffic.lambda},
      {"mu", cfg.traffic.mu},
      {"dist", to_string(cfg.traffic.dist)},
      {"max_size", cfg.traffic.max_size},
      {"min_size", cfg.traffic.effective_min_size()},
      {"pareto_shape", cfg.traffic.dist == SizeDistribution::pareto
                           ? nlohmann::json(pareto_shape(cfg.traffic.mu,
                                                         static_cast<double>(
                                                             cfg.traffic.effective_min_size())))
                           : nlohmann::json(nullptr)},
      {"arrivals", cfg.arrivals ? nlohmann::json(*cfg.arrivals) : nlohmann::json(nullptr)},
      {"slots", cfg.slots ? nlohmann::json(*cfg.slots) : nlohmann::json(nullptr)},
      {"drain", cfg.drain},
      {"replicas", cfg.replicas},
      {"seed", cfg.seed},
      {"replica_seeds", replica_seeds},
      {"trace_file", cfg.trace_file ? nlohmann::json(*cfg.trace_file) : nlohmann::json(nullptr)},
  };
}

SimulationResult run_simulation(const SimConfig& cfg, const Topology& topo) {
  validate(cfg);
  SimulationResult result;
  result.config = to_json(cfg);
  result.topology_name = topo.name();

  std::optional<std::vector<ArrivalEvent>> replayed;
  if (cfg.trace_file) replayed = load_trace(*cfg.trace_file);
  for (std::size_t r = 0; r < cfg.replicas; ++r) {
    if (replayed) {
      result.traces.push_back(*replayed);
      continue;
    }
    TrafficConfig traffic = cfg.traffic;
    traffic.seed = replica_seed(cfg.seed, r);
    result.traces.push_back(
        gen_arrivals(traffic, topo.node_count(), ArrivalStop{cfg.arrivals, cfg.slots}));
  }

  for (std::size_t r = 0; r < cfg.replicas; ++r) {
    for (auto scheme : cfg.schemes) {
      for (auto policy : cfg.policies) {
        result.runs.push_back({scheme, policy, r, replica_seed(cfg.seed, r), {}});
      }
    }
  }

  parallel_for(result.runs.size(), cfg.threads, [&](std::size_t i) {
    ScenarioRun& run = result.runs[i];
    Engine engine(topo, run.scheme, run.policy, replica_seed(cfg.seed ^ kRouteSeedSalt, run.replica));
    engine.add_arrivals(result.traces[run.replica]);
    engine.run_until(RunLimit{cfg.drain ? std::nullopt : cfg.slots, false});
    const auto latencies = route_latencies(engine);
    nlohmann::json echo = {{"scheme", to_string(run.scheme)},
                           {"policy", to_string(run.policy)},
                           {"replica", run.replica},
                           {"seed", run.seed}};
    run.report = summarize(collect_outcomes(engine.flows()), {}, latencies, std::move(echo));
  });
  return result;
}

void write_flows_csv(std::ostream& out, const SimulationResult& result) {
  out << "# config: " << result.config.dump() << '\n';
  out << "flow_id,src,dst,arrival_slot,volume,hops,finish_slot,fct,scheme,policy,seed\n";
  for (const auto& run : result.runs) {
    const auto scheme = to_string(run.scheme);
    const auto policy = to_string(run.policy);
    for (const auto& row : run.report.per_flow) {
      out << row.id << ',' << row.src << ',' << row.dst << ',' << row.arrival_slot << ','
          << row.volume << ',' << row.hops << ',';
      if (row.finish_slot) out << *row.finish_slot;
      out << ',';
      if (row.fct) out << *row.fct;
      out << ',' << scheme << ',' << policy << ',' << run.seed << '\n';
    }
  }
}

nlohmann::json simulation_report(const SimulationResult& result) {
  nlohmann::json runs = nlohmann::json::array();
  struct Samples {
    std::vector<double> mean, p99, max, incomplete, latency_max;
  };
  std::map<std::pair<Scheme, Policy>, Samples> by_pair;
  for (const auto& run : result.runs) {
    auto entry = to_json(run.report);
    entry["scheme"] = to_string(run.scheme);
    entry["policy"] = to_string(run.policy);
    entry["replica"] = run.replica;
    entry["seed"] = run.seed;
    runs.push_back(std::move(entry));

    auto& s = by_pair[{run.scheme, run.policy}];
    if (run.report.mean_fct) s.mean.push_back(*run.report.mean_fct);
    if (run.report.tail_fct_p99) s.p99.push_back(*run.report.tail_fct_p99);
    if (run.report.tail_fct_max) s.max.push_back(*run.report.tail_fct_max);
    s.incomplete.push_back(static_cast<double>(run.report.incomplete_count));
    if (run.report.route_latency_max_ms) s.latency_max.push_back(*run.report.route_latency_max_ms);
  }

  // Cross-replica means grouped per policy for normalisation.
  std::map<Policy, std::vector<std::pair<Scheme, std::pair<double, double>>>> per_policy;
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& [key, s] : by_pair) {
    const auto mean = replica_stats(s.mean);
    const auto p99 = replica_stats(s.p99);
    summary.push_back({{"scheme", to_string(key.first)},
                       {"policy", to_string(key.second)},
                       {"mean_fct", to_json(mean)},
                       {"p99_fct", to_json(p99)},
                       {"max_fct", to_json(replica_stats(s.max))},
                       {"incomplete", to_json(replica_stats(s.incomplete))},
                       {"route_latency_max_ms", to_json(replica_stats(s.latency_max))}});
    if (mean.count > 0 && p99.count > 0) {
      per_policy[key.second].push_back({key.first, {mean.mean, p99.mean}});
    }
  }
  nlohmann::json normalized = nlohmann::json::array();
  for (const auto& [policy, entries] : per_policy) {
    std::vector<double> means;
    std::vector<double> tails;
    for (const auto& e : entries) {
      means.push_back(e.second.first);
      tails.push_back(e.second.second);
    }
    const auto nm = normalize_group(means);
    const auto nt = normalize_group(tails);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      normalized.push_back({{"policy", to_string(policy)},
                            {"scheme", to_string(entries[i].first)},
                            {"mean_fct", nm[i]},
                            {"p99_fct", nt[i]}});
    }
  }

  // Sizes are clamped to max_size, so the realised mean sits below mu for
  // heavy tails; record it next to the configured value.
  nlohmann::json traces = nlohmann::json::array();
  for (std::size_t r = 0; r < result.traces.size(); ++r) {
    const auto& trace = result.traces[r];
    double units = 0.0;
    for (const auto& ev : trace) units += static_cast<double>(ev.volume);
    traces.push_back({{"replica", r},
                      {"arrivals", trace.size()},
                      {"mean_volume", trace.empty() ? 0.0 : units / static_cast<double>(trace.size())},
                      {"last_arrival_slot", trace.empty() ? 0 : trace.back().arrival_slot}});
  }

  return {{"schema", "wanroute.simulate"},
          {"schema_version", kReportSchemaVersion},
          {"config", result.config},
          {"topology", result.topology_name},
          {"traces", traces},
          {"runs", runs},
          {"summary", summary},
          {"normalized", normalized}};
}

// --------------------------------------------------------------------- gap --

GuardReport check_oracle_guard(const Topology& topo, std::uint64_t cap) {
  GuardReport report;
  const auto n = static_cast<NodeId>(topo.node_count());
  if (n < 2) return report;
  constexpr std::size_t kSamples = 32;
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1);
  const std::uint64_t stride = std::max<std::uint64_t>(1, pairs / kSamples);
  const auto components = connected_components(topo);
  std::vector<std::size_t> component_of(n);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (NodeId v : components[c]) component_of[v] = c;
  }
  for (std::uint64_t p = 0; p < pairs; p += stride) {
    const auto src = static_cast<NodeId>(p / (n - 1));
    auto dst = static_cast<NodeId>(p % (n - 1));
    if (dst >= src) ++dst;
    if (component_of[src] != component_of[dst]) continue;
    const auto count = count_paths(topo, src, dst, cap);
    if (count > report.largest_count) {
      report.largest_count = count;
      report.src = src;
      report.dst = dst;
    }
    if (count >= cap) {
      report.within_limit = false;
      break;
    }
  }
  return report;
}

GapResult run_gap(const GapConfig& cfg) {
  if (cfg.arrivals == 0) throw ConfigError("arrivals must be positive");
  if (cfg.seeds.empty() || cfg.dists.empty() || cfg.topologies.empty()) {
    throw ConfigError("gap needs at least one topology, distribution and seed");
  }
  std::vector<Topology> topologies;
  for (const auto& name : cfg.topologies) {
    topologies.push_back(load_topology(name));
    const auto guard = check_oracle_guard(topologies.back(), cfg.path_guard);
    if (!guard.within_limit && !cfg.force) {
      throw ConfigError("topology '" + name + "' has at least " +
                        std::to_string(guard.largest_count) + " simple paths between nodes " +
                        std::to_string(guard.src) + " and " + std::to_string(guard.dst) +
                        "; the exact oracle would be intractable. Pass --force to run anyway "
                        "or raise --path-guard");
    }
  }

  GapResult result;
  nlohmann::json dists = nlohmann::json::array();
  for (auto d : cfg.dists) dists.push_back(to_string(d));
  result.config = {{"topologies", cfg.topologies},
                   {"dists", dists},
                   {"lambda", cfg.lambda},
                   {"mu", cfg.mu},
                   {"arrivals", cfg.arrivals},
                   {"seeds", cfg.seeds},
                   {"policy", to_string(cfg.policy)},
                   {"oracle_timeout_s", cfg.oracle_timeout.count()},
                   {"raw_oracle", cfg.raw_oracle},
                   {"path_guard", cfg.path_guard},
                   {"force", cfg.force}};

  std::vector<std::size_t> topo_of_cell;
  for (std::size_t t = 0; t < topologies.size(); ++t) {
    for (auto dist : cfg.dists) {
      for (auto seed : cfg.seeds) {
        GapCell cell;
        cell.topology = cfg.topologies[t];
        cell.dist = dist;
        cell.seed = seed;
        result.cells.push_back(std::move(cell));
        topo_of_cell.push_back(t);
      }
    }
  }

  parallel_for(result.cells.size(), cfg.threads, [&](std::size_t i) {
    GapCell& cell = result.cells[i];
    const Topology& topo = topologies[topo_of_cell[i]];
    const auto started = std::chrono::steady_clock::now();

    TrafficConfig traffic;
    traffic.lambda = cfg.lambda;
    traffic.mu = cfg.mu;
    traffic.dist = cell.dist;
    traffic.seed = cell.seed;
    const auto arrivals =
        gen_arrivals(traffic, topo.node_count(), ArrivalStop{cfg.arrivals, std::nullopt});

    Engine engine(topo, Scheme::bwrh, cfg.policy);
    engine.set_route_observer([&](const FlowIndex& snapshot, const RouteRequest& req,
                                  const RouteResult& heuristic) {
      cell.max_bwrh_ms = std::max(cell.max_bwrh_ms, to_ms(heuristic.stats.elapsed));
      OracleOptions options;
      options.raw_enumeration = cfg.raw_oracle;
      options.deadline = std::chrono::steady_clock::now() +
                         std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             cfg.oracle_timeout);
      try {
        const auto optimal = route_optimal(topo, snapshot, req, options);
        const double g = optimality_gap(heuristic.weight, optimal.weight);
        cell.gaps.push_back(g);
        if (heuristic.weight == optimal.weight) ++cell.optimal_count;
        if (std::isinf(g)) ++cell.unbounded_count;
      } catch (const OracleTimeout&) {
        ++cell.timeouts;
      }
    });
    engine.add_arrivals(arrivals);
    engine.run_until(RunLimit{std::nullopt, true});

    if (!cell.gaps.empty()) {
      const auto report = summarize({}, cell.gaps, {});
      cell.mean_gap = *report.gap_mean;
      cell.max_gap = *report.gap_max;
      std::vector<double> finite;
      std::copy_if(cell.gaps.begin(), cell.gaps.end(), std::back_inserter(finite),
                   [](double g) { return std::isfinite(g); });
      if (!finite.empty()) cell.finite_mean_gap = *summarize({}, finite, {}).gap_mean;
    }
    cell.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  });
  return result;
}

nlohmann::json to_json(const GapResult& result) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"topology", c.topology},
                     {"dist", to_string(c.dist)},
                     {"seed", c.seed},
                     {"evaluated", c.gaps.size()},
                     {"timeouts", c.timeouts},
                     {"optimal", c.optimal_count},
                     {"unbounded", c.unbounded_count},
                     {"mean_gap", finite_or_inf(c.mean_gap)},
                     {"finite_mean_gap", c.finite_mean_gap},
                     {"max_gap", finite_or_inf(c.max_gap)},
                     {"max_bwrh_ms", c.max_bwrh_ms},
                     {"seconds", c.seconds}});
  }
  return {{"schema", "wanroute.gap"},
          {"schema_version", kReportSchemaVersion},
          {"config", result.config},
          {"cells", cells}};
}

// ----------------------------------------------------------------- latency --

LatencyResult run_latency(const LatencyConfig& cfg) {
  if (cfg.arrivals == 0) throw ConfigError("arrivals must be positive");
  std::vector<Topology> topologies;
  for (const auto& name : cfg.topologies) topologies.push_back(load_topology(name));

  LatencyResult result;
  nlohmann::json dists = nlohmann::json::array();
  for (auto d : cfg.dists) dists.push_back(to_string(d));
  nlohmann::json policies = nlohmann::json::array();
  for (auto p : cfg.policies) policies.push_back(to_string(p));
  result.config = {{"topologies", cfg.topologies}, {"dists", dists},
                   {"policies", policies},         {"lambdas", cfg.lambdas},
                   {"mus", cfg.mus},               {"arrivals", cfg.arrivals},
                   {"seed", cfg.seed}};

  std::vector<std::size_t> topo_of_point;
  for (std::size_t t = 0; t < topologies.size(); ++t) {
    for (auto dist : cfg.dists) {
      for (auto policy : cfg.policies) {
        for (double lambda : cfg.lambdas) {
          for (double mu : cfg.mus) {
            result.points.push_back({cfg.topologies[t], dist, policy, lambda, mu});
            topo_of_point.push_back(t);
          }
        }
      }
    }
  }

  parallel_for(result.points.size(), cfg.threads, [&](std::size_t i) {
    LatencyPoint& point = result.points[i];
    const Topology& topo = topologies[topo_of_point[i]];
    TrafficConfig traffic;
    traffic.lambda = point.lambda;
    traffic.mu = point.mu;
    traffic.dist = point.dist;
    traffic.seed = replica_seed(cfg.seed, i);
    const auto arrivals =
        gen_arrivals(traffic, topo.node_count(), ArrivalStop{cfg.arrivals, std::nullopt});
    Engine engine(topo, Scheme::bwrh, point.policy);
    engine.add_arrivals(arrivals);
    engine.run_until(RunLimit{std::nullopt, true});
    const auto report = summarize({}, {}, route_latencies(engine));
    point.calls = engine.admissions().size();
    point.max_ms = report.route_latency_max_ms.value_or(0.0);
    point.mean_ms = report.route_latency_mean_ms.value_or(0.0);
  });

  double sum_of_max = 0.0;
  for (const auto& p : result.points) {
    result.max_ms = std::max(result.max_ms, p.max_ms);
    sum_of_max += p.max_ms;
  }
  if (!result.points.empty()) {
    result.mean_of_max_ms = sum_of_max / static_cast<double>(result.points.size());
  }
  return result;
}

nlohmann::json to_json(const LatencyResult& result) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : result.points) {
    points.push_back({{"topology", p.topology},
                      {"dist", to_string(p.dist)},
                      {"policy", to_string(p.policy)},
                      {"lambda", p.lambda},
                      {"mu", p.mu},
                      {"calls", p.calls},
                      {"max_ms", p.max_ms},
                      {"mean_ms", p.mean_ms}});
  }
  return {{"schema", "wanroute.latency"},
          {"schema_version", kReportSchemaVersion},
          {"config", result.config},
          {"max_ms", result.max_ms},
          {"mean_of_max_ms", result.mean_of_max_ms},
          {"points", points}};
}

// -------------------------------------------------------------------- topo --

TopologySummary summarize_topology(const Topology& topo) {
  TopologySummary s;
  s.name = topo.name();
  s.nodes = topo.node_count();
  s.links = topo.link_count();
  s.directed_edges = topo.edge_count();
  s.components = connected_components(topo);
  s.dropped = topo.build_stats();
  return s;
}

std::string format_summary(const TopologySummary& s) {
  std::ostringstream out;
  out << "topology: " << s.name << '\n'
      << "nodes: " << s.nodes << '\n'
      << "links: " << s.links << " (" << s.directed_edges << " directed edges)\n"
      << "dropped duplicate links: " << s.dropped.duplicate_links << '\n'
      << "dropped self-loops: " << s.dropped.self_loops << '\n';
  if (s.connected()) {
    out << "connected: yes\n";
    return out.str();
  }
  out << "connected: no (" << s.components.size() << " components)\n";
  for (std::size_t c = 0; c < s.components.size(); ++c) {
    out << "warning: component " << c << ":";
    for (NodeId v : s.components[c]) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace wanroute
