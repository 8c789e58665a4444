#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "wanroute/flowstate.hpp"
#include "wanroute/topology.hpp"

namespace wanroute {

struct RouteRequest {
  NodeId src{};
  NodeId dst{};
  Units volume{1};
};

struct SearchStats {
  std::uint64_t paths_examined = 0;
  /// Hop bound at which the search stopped (BWRH only; 0 elsewhere).
  std::uint32_t final_k = 0;
  std::chrono::nanoseconds elapsed{0};
};

struct RouteResult {
  Path path;
  Units weight = 0;  ///< path_weight() of `path` on the snapshot used
  std::uint32_t hops = 0;
  SearchStats stats;
};

enum class Scheme { bwrh, min_hop, min_max_util, random_uniform };

std::string_view to_string(Scheme scheme);
/// Accepts bwrh, minhop, minmax, random. Throws ConfigError otherwise.
Scheme parse_scheme(std::string_view text);

/// Sum of remaining data units over the distinct unfinished flows that share
/// at least one edge with `path`. A flow crossing several edges counts once.
Units path_weight(const FlowIndex& index, const Path& path);

/// Completion time of a new `volume`-unit flow on `path` when every competing
/// unit is sent before its last one: path_weight + volume.
Units worst_case_completion(const FlowIndex& index, const Path& path, Units volume);

/// Iterative deepening over hop-bounded simple paths: starting from the
/// minimum hop count K, compute the minimum weight among paths with at most
/// K hops; increase K while that minimum keeps dropping, and return the
/// minimum-weight path with at most K-1 hops. Ties go to fewer hops, then to
/// depth-first enumeration order.
RouteResult route_bwrh(const Topology& topo, const FlowIndex& index, const RouteRequest& req);

struct OracleOptions {
  /// Examine every simple path instead of pruning with the weight bound.
  bool raw_enumeration = false;
  /// Throw OracleTimeout once this instant has passed.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Exact minimum-weight simple path (ties: fewer hops, then enumeration
/// order) by depth-first branch and bound. Weights only grow as a path is
/// extended, so any prefix already at least as heavy as the incumbent is cut.
RouteResult route_optimal(const Topology& topo, const FlowIndex& index, const RouteRequest& req,
                          const OracleOptions& options = {});

/// (heuristic - optimal) / optimal. Zero when both are zero, +infinity when
/// only the optimum is zero. Throws PreconditionError if heuristic < optimal.
double optimality_gap(Units heuristic_weight, Units optimal_weight);

/// First minimum-hop path in enumeration order, regardless of load.
RouteResult route_min_hop(const Topology& topo, const FlowIndex& index, const RouteRequest& req);

/// Load on an edge: remaining units of the unfinished flows crossing it.
Units edge_utilization(const FlowIndex& index, EdgeId edge);
/// Largest edge_utilization() along `path`.
Units bottleneck_utilization(const FlowIndex& index, const Path& path);

/// Path minimising the bottleneck utilization over all simple paths, found by
/// binary search on the utilization threshold. Among those, fewest hops and
/// then enumeration order.
RouteResult route_min_max_util(const Topology& topo, const FlowIndex& index,
                               const RouteRequest& req);

/// Uniform choice among the simple paths at most one hop longer than the
/// minimum hop count.
RouteResult route_random_uniform(const Topology& topo, const FlowIndex& index,
                                 const RouteRequest& req, std::mt19937_64& rng);

/// Dispatches on `scheme`. `rng` is only consumed by random_uniform.
RouteResult route(Scheme scheme, const Topology& topo, const FlowIndex& index,
                  const RouteRequest& req, std::mt19937_64& rng);

}  // namespace wanroute
