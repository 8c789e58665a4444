#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wanroute/metrics.hpp"
#include "wanroute/routing.hpp"
#include "wanroute/scheduler.hpp"
#include "wanroute/topology.hpp"
#include "wanroute/traffic.hpp"

namespace wanroute {

/// Version of the JSON documents written by the experiment drivers.
inline constexpr int kReportSchemaVersion = 1;

/// $WANROUTE_SEED when set to an integer, otherwise 1.
std::uint64_t default_seed();

// ---------------------------------------------------------------- simulate --

struct SimConfig {
  std::string topology = "ans";
  std::vector<Scheme> schemes{Scheme::bwrh};
  std::vector<Policy> policies{Policy::fcfs};
  TrafficConfig traffic;  ///< traffic.seed is replaced per replica
  std::optional<std::size_t> arrivals;
  /// Arrival horizon; also the simulation horizon unless `drain` is set.
  std::optional<Slot> slots;
  /// Keep simulating after the horizon until every admitted flow finishes.
  bool drain = false;
  std::size_t replicas = 1;
  std::uint64_t seed = 1;
  /// Replay this trace in every replica instead of generating traffic.
  std::optional<std::string> trace_file;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Throws ConfigError for an unusable configuration.
void validate(const SimConfig& cfg);
/// Resolved configuration; excludes the thread count so outputs do not
/// depend on it.
nlohmann::json to_json(const SimConfig& cfg);

struct ScenarioRun {
  Scheme scheme{};
  Policy policy{};
  std::size_t replica = 0;
  std::uint64_t seed = 0;  ///< traffic seed of this replica
  RunReport report;
};

struct SimulationResult {
  nlohmann::json config;
  std::string topology_name;
  std::vector<std::vector<ArrivalEvent>> traces;  ///< one per replica
  std::vector<ScenarioRun> runs;  ///< replica-major, then scheme, then policy
};

/// Every scheme x policy pair is run on the same per-replica trace.
SimulationResult run_simulation(const SimConfig& cfg, const Topology& topo);

/// flow_id,src,dst,arrival_slot,volume,hops,finish_slot,fct,scheme,policy,seed
/// preceded by a "# config: {...}" line. Byte-identical for identical configs.
void write_flows_csv(std::ostream& out, const SimulationResult& result);

/// Per-run aggregates plus cross-replica mean/stddev and, per policy, each
/// scheme's mean and p99 FCT divided by the best scheme's.
nlohmann::json simulation_report(const SimulationResult& result);

// --------------------------------------------------------------------- gap --

struct GapConfig {
  std::vector<std::string> topologies{"gscale", "agis", "ans"};
  std::vector<SizeDistribution> dists{SizeDistribution::exponential, SizeDistribution::pareto};
  double lambda = 10.0;
  double mu = 50.0;
  std::size_t arrivals = 1000;
  std::vector<std::uint64_t> seeds{1};
  Policy policy = Policy::fcfs;
  std::chrono::duration<double> oracle_timeout{60.0};
  bool raw_oracle = false;
  /// Run the oracle even where the path-count guard refuses.
  bool force = false;
  std::uint64_t path_guard = 100000;
  unsigned threads = 0;
};

struct GapCell {
  std::string topology;
  SizeDistribution dist{};
  std::uint64_t seed = 0;
  std::vector<double> gaps;  ///< one per arrival the oracle finished
  std::size_t timeouts = 0;
  std::size_t optimal_count = 0;  ///< arrivals where BWRH matched the oracle
  /// Arrivals with a zero-weight optimum that BWRH missed (gap = +inf).
  std::size_t unbounded_count = 0;
  double mean_gap = 0.0;         ///< over all evaluated arrivals
  double finite_mean_gap = 0.0;  ///< excluding unbounded arrivals
  double max_gap = 0.0;
  double max_bwrh_ms = 0.0;
  double seconds = 0.0;
};

struct GapResult {
  nlohmann::json config;
  std::vector<GapCell> cells;  ///< topology-major, then distribution, then seed
};

struct GuardReport {
  bool within_limit = true;
  std::uint64_t largest_count = 0;
  NodeId src = 0;
  NodeId dst = 0;
};

/// Counts simple paths for a deterministic sample of node pairs, stopping
/// at `cap`.
GuardReport check_oracle_guard(const Topology& topo, std::uint64_t cap);

/// Routes every arrival with BWRH (the network evolves with BWRH's choices)
/// and evaluates the exact oracle on the same snapshot. Throws ConfigError
/// when the guard refuses a topology and `force` is unset.
GapResult run_gap(const GapConfig& cfg);
nlohmann::json to_json(const GapResult& result);

// ----------------------------------------------------------------- latency --

struct LatencyConfig {
  std::vector<std::string> topologies{"gscale", "agis", "ans"};
  std::vector<SizeDistribution> dists{SizeDistribution::exponential, SizeDistribution::pareto};
  std::vector<Policy> policies{Policy::fcfs, Policy::srpt, Policy::fair};
  std::vector<double> lambdas{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> mus{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  std::size_t arrivals = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct LatencyPoint {
  std::string topology;
  SizeDistribution dist{};
  Policy policy{};
  double lambda = 0.0;
  double mu = 0.0;
  std::size_t calls = 0;
  double max_ms = 0.0;
  double mean_ms = 0.0;
};

struct LatencyResult {
  nlohmann::json config;
  std::vector<LatencyPoint> points;
  double max_ms = 0.0;
  double mean_of_max_ms = 0.0;
};

/// Wall-clock time of every route_bwrh() call over each sweep point.
LatencyResult run_latency(const LatencyConfig& cfg);
nlohmann::json to_json(const LatencyResult& result);

// -------------------------------------------------------------------- topo --

struct TopologySummary {
  std::string name;
  std::size_t nodes = 0;
  std::size_t links = 0;
  std::size_t directed_edges = 0;
  std::vector<std::vector<NodeId>> components;
  BuildStats dropped;

  bool connected() const noexcept { return components.size() <= 1; }
};

TopologySummary summarize_topology(const Topology& topo);
/// Human-readable summary; names the components of a disconnected graph.
std::string format_summary(const TopologySummary& summary);

}  // namespace wanroute
