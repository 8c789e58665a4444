#include "wanroute/routing.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <string>

#include "wanroute/error.hpp"

namespace wanroute {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::bwrh: return "bwrh";
    case Scheme::min_hop: return "minhop";
    case Scheme::min_max_util: return "minmax";
    case Scheme::random_uniform: return "random";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view text) {
  for (auto s : {Scheme::bwrh, Scheme::min_hop, Scheme::min_max_util, Scheme::random_uniform}) {
    if (to_string(s) == text) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(text) +
                    "' (valid: bwrh, minhop, minmax, random)");
}

Units path_weight(const FlowIndex& index, const Path& path) {
  std::vector<FlowId> sharing;
  for (EdgeId e : path.edges) {
    const auto on_edge = index.flows_on(e);
    sharing.insert(sharing.end(), on_edge.begin(), on_edge.end());
  }
  std::sort(sharing.begin(), sharing.end());
  sharing.erase(std::unique(sharing.begin(), sharing.end()), sharing.end());
  Units total = 0;
  for (FlowId id : sharing) total += index.remaining(id);
  return total;
}

Units worst_case_completion(const FlowIndex& index, const Path& path, Units volume) {
  return path_weight(index, path) + volume;
}

double optimality_gap(Units heuristic_weight, Units optimal_weight) {
  if (optimal_weight < 0 || heuristic_weight < optimal_weight) {
    throw PreconditionError("heuristic weight " + std::to_string(heuristic_weight) +
                            " is below the optimum " + std::to_string(optimal_weight));
  }
  if (optimal_weight == 0) {
    return heuristic_weight == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(heuristic_weight - optimal_weight) /
         static_cast<double>(optimal_weight);
}

namespace {

using Clock = std::chrono::steady_clock;

void check_request(const Topology& topo, const RouteRequest& req) {
  if (!topo.contains(req.src) || !topo.contains(req.dst)) {
    throw PreconditionError("route request references an unknown node");
  }
  if (req.src == req.dst) throw PreconditionError("route request has src == dst");
  if (req.volume < 1) throw PreconditionError("route request volume must be at least 1");
}

[[noreturn]] void throw_no_path(const RouteRequest& req) {
  throw NoPathError("no path from " + std::to_string(req.src) + " to " + std::to_string(req.dst));
}

/// Incrementally maintained weight of the path currently on the DFS stack.
class CoverTracker {
 public:
  explicit CoverTracker(const FlowIndex& index) : index_(index), cover_(index.id_bound(), 0) {}

  /// Weight the stack would have after pushing `edge`, without pushing it.
  Units weight_with(EdgeId edge) const {
    Units w = weight_;
    for (FlowId f : index_.flows_on(edge)) {
      if (cover_[f] == 0) w += index_.remaining(f);
    }
    return w;
  }

  void push(EdgeId edge) {
    for (FlowId f : index_.flows_on(edge)) {
      if (cover_[f]++ == 0) weight_ += index_.remaining(f);
    }
  }

  void pop(EdgeId edge) {
    for (FlowId f : index_.flows_on(edge)) {
      if (--cover_[f] == 0) weight_ -= index_.remaining(f);
    }
  }

  Units weight() const noexcept { return weight_; }

 private:
  const FlowIndex& index_;
  std::vector<std::uint32_t> cover_;
  Units weight_ = 0;
};

struct Incumbent {
  bool found = false;
  Units weight = std::numeric_limits<Units>::max();
  std::uint32_t hops = std::numeric_limits<std::uint32_t>::max();
  std::vector<EdgeId> edges;
};

/// Depth-first search over simple paths with at most `max_hops` edges,
/// visiting neighbours in ascending node id. Keeps the first path with the
/// smallest (weight, hops). With `prune` set, prefixes that cannot beat the
/// incumbent are cut.
class MinWeightSearch {
 public:
  MinWeightSearch(const Topology& topo, const FlowIndex& index, NodeId dst,
                  std::vector<std::uint32_t> dist)
      : topo_(topo), tracker_(index), dst_(dst), dist_(std::move(dist)),
        on_path_(topo.node_count(), false) {}

  Incumbent run(NodeId src, std::uint32_t max_hops, bool prune,
                std::optional<Clock::time_point> deadline = std::nullopt) {
    best_ = Incumbent{};
    max_hops_ = max_hops;
    prune_ = prune;
    deadline_ = deadline;
    if (dist_[src] <= max_hops) {
      on_path_[src] = true;
      descend(src);
      on_path_[src] = false;
    }
    return best_;
  }

  std::uint64_t paths_examined() const noexcept { return examined_; }

 private:
  void descend(NodeId at) {
    if (deadline_ && (++expansions_ & 0x3ff) == 0 && Clock::now() > *deadline_) {
      throw OracleTimeout("exact search exceeded its time budget");
    }
    const auto depth = static_cast<std::uint32_t>(stack_.size());
    for (EdgeId id : topo_.out_edges(at)) {
      const NodeId next = topo_.edge(id).head;
      if (on_path_[next] || dist_[next] == kUnreachable) continue;
      if (depth + 1 + dist_[next] > max_hops_) continue;
      if (prune_ && best_.found) {
        const Units w = tracker_.weight_with(id);
        if (w > best_.weight || (w == best_.weight && depth + 1 + dist_[next] >= best_.hops)) {
          continue;
        }
      }
      tracker_.push(id);
      stack_.push_back(id);
      if (next == dst_) {
        record();
      } else {
        on_path_[next] = true;
        descend(next);
        on_path_[next] = false;
      }
      stack_.pop_back();
      tracker_.pop(id);
    }
  }

  void record() {
    ++examined_;
    const Units w = tracker_.weight();
    const auto hops = static_cast<std::uint32_t>(stack_.size());
    if (!best_.found || w < best_.weight || (w == best_.weight && hops < best_.hops)) {
      best_.found = true;
      best_.weight = w;
      best_.hops = hops;
      best_.edges = stack_;
    }
  }

  const Topology& topo_;
  CoverTracker tracker_;
  NodeId dst_;
  std::vector<std::uint32_t> dist_;
  std::vector<bool> on_path_;
  std::vector<EdgeId> stack_;
  Incumbent best_;
  std::uint32_t max_hops_ = 0;
  bool prune_ = false;
  std::optional<Clock::time_point> deadline_;
  std::uint64_t examined_ = 0;
  std::uint64_t expansions_ = 0;
};

RouteResult make_result(const RouteRequest& req, std::vector<EdgeId> edges, Units weight,
                        Clock::time_point started) {
  RouteResult result;
  result.path = Path{req.src, req.dst, std::move(edges)};
  result.weight = weight;
  result.hops = result.path.hops();
  result.stats.elapsed = Clock::now() - started;
  return result;
}

/// Lexicographically first shortest path using only edges for which
/// `allowed(edge)` holds. Empty when dst is unreachable.
template <typename Allowed>
std::vector<EdgeId> first_shortest_path(const Topology& topo, NodeId src, NodeId dst,
                                        Allowed allowed) {
  // Distances to dst over allowed edges, via BFS along reversed edges.
  std::vector<std::uint32_t> dist(topo.node_count(), kUnreachable);
  std::deque<NodeId> queue{dst};
  dist[dst] = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (EdgeId out : topo.out_edges(v)) {
      const NodeId u = topo.edge(out).head;
      const auto into_v = topo.find_edge(u, v);
      if (dist[u] == kUnreachable && into_v && allowed(*into_v)) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  std::vector<EdgeId> edges;
  if (dist[src] == kUnreachable) return edges;
  NodeId at = src;
  while (at != dst) {
    for (EdgeId id : topo.out_edges(at)) {
      const NodeId next = topo.edge(id).head;
      if (allowed(id) && dist[next] != kUnreachable && dist[next] + 1 == dist[at]) {
        edges.push_back(id);
        at = next;
        break;
      }
    }
  }
  return edges;
}

}  // namespace

RouteResult route_bwrh(const Topology& topo, const FlowIndex& index, const RouteRequest& req) {
  const auto started = Clock::now();
  check_request(topo, req);
  auto dist = hops_to(topo, req.dst);
  if (dist[req.src] == kUnreachable) throw_no_path(req);

  MinWeightSearch search(topo, index, req.dst, std::move(dist));
  std::uint32_t k = min_hop_distance(topo, req.src, req.dst);
  Incumbent previous = search.run(req.src, k, /*prune=*/false);
  for (;;) {
    ++k;
    Incumbent current = search.run(req.src, k, /*prune=*/false);
    if (current.weight >= previous.weight) break;
    previous = std::move(current);
  }

  auto result = make_result(req, std::move(previous.edges), previous.weight, started);
  result.stats.paths_examined = search.paths_examined();
  result.stats.final_k = k;
  return result;
}

RouteResult route_optimal(const Topology& topo, const FlowIndex& index, const RouteRequest& req,
                          const OracleOptions& options) {
  const auto started = Clock::now();
  check_request(topo, req);
  auto dist = hops_to(topo, req.dst);
  if (dist[req.src] == kUnreachable) throw_no_path(req);

  MinWeightSearch search(topo, index, req.dst, std::move(dist));
  const auto max_hops = static_cast<std::uint32_t>(topo.node_count() - 1);
  Incumbent best = search.run(req.src, max_hops, !options.raw_enumeration, options.deadline);

  auto result = make_result(req, std::move(best.edges), best.weight, started);
  result.stats.paths_examined = search.paths_examined();
  return result;
}

RouteResult route_min_hop(const Topology& topo, const FlowIndex& index, const RouteRequest& req) {
  const auto started = Clock::now();
  check_request(topo, req);
  auto edges = first_shortest_path(topo, req.src, req.dst, [](EdgeId) { return true; });
  if (edges.empty()) throw_no_path(req);
  Path path{req.src, req.dst, edges};
  auto result = make_result(req, std::move(edges), path_weight(index, path), started);
  result.stats.paths_examined = 1;
  return result;
}

Units edge_utilization(const FlowIndex& index, EdgeId edge) {
  Units load = 0;
  for (FlowId f : index.flows_on(edge)) load += index.remaining(f);
  return load;
}

Units bottleneck_utilization(const FlowIndex& index, const Path& path) {
  Units worst = 0;
  for (EdgeId e : path.edges) worst = std::max(worst, edge_utilization(index, e));
  return worst;
}

RouteResult route_min_max_util(const Topology& topo, const FlowIndex& index,
                               const RouteRequest& req) {
  const auto started = Clock::now();
  check_request(topo, req);

  std::vector<Units> load(topo.edge_count());
  for (EdgeId e = 0; e < topo.edge_count(); ++e) load[e] = edge_utilization(index, e);
  std::vector<Units> thresholds = load;
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const auto reachable_within = [&](Units theta) {
    std::vector<bool> seen(topo.node_count(), false);
    std::deque<NodeId> queue{req.src};
    seen[req.src] = true;
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      if (u == req.dst) return true;
      for (EdgeId id : topo.out_edges(u)) {
        const NodeId v = topo.edge(id).head;
        if (!seen[v] && load[id] <= theta) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    return false;
  };

  if (thresholds.empty() || !reachable_within(thresholds.back())) throw_no_path(req);
  std::size_t lo = 0;
  std::size_t hi = thresholds.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (reachable_within(thresholds[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const Units theta = thresholds[lo];

  auto edges = first_shortest_path(topo, req.src, req.dst,
                                    [&](EdgeId id) { return load[id] <= theta; });
  Path path{req.src, req.dst, edges};
  auto result = make_result(req, std::move(edges), path_weight(index, path), started);
  result.stats.paths_examined = 1;
  return result;
}

RouteResult route_random_uniform(const Topology& topo, const FlowIndex& index,
                                 const RouteRequest& req, std::mt19937_64& rng) {
  const auto started = Clock::now();
  check_request(topo, req);
  const auto k = min_hop_distance(topo, req.src, req.dst);
  auto candidates = enumerate_paths(topo, req.src, req.dst, k + 1);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  Path& chosen = candidates[pick(rng)];
  const Units weight = path_weight(index, chosen);
  auto result = make_result(req, std::move(chosen.edges), weight, started);
  result.stats.paths_examined = candidates.size();
  return result;
}

RouteResult route(Scheme scheme, const Topology& topo, const FlowIndex& index,
                  const RouteRequest& req, std::mt19937_64& rng) {
  switch (scheme) {
    case Scheme::bwrh: return route_bwrh(topo, index, req);
    case Scheme::min_hop: return route_min_hop(topo, index, req);
    case Scheme::min_max_util: return route_min_max_util(topo, index, req);
    case Scheme::random_uniform: return route_random_uniform(topo, index, req, rng);
  }
  throw ConfigError("unhandled scheme");
}

}  // namespace wanroute
