#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wanroute {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

struct DirEdge {
  NodeId tail{};
  NodeId head{};

  friend auto operator<=>(const DirEdge&, const DirEdge&) = default;
};

struct Link {
  NodeId a{};
  NodeId b{};
};

/// Counters for input links that did not become edges.
struct BuildStats {
  std::size_t duplicate_links = 0;
  std::size_t self_loops = 0;
};

/// Immutable network graph with unit-capacity directed edges.
///
/// Every undirected input link {a, b} becomes the two directed edges (a, b)
/// and (b, a). Duplicate links and self-loops are dropped and counted.
/// Edge ids are assigned in ascending (tail, head) order, so the out-edges
/// of each node are sorted by head node id.
class Topology {
 public:
  Topology() = default;
  Topology(std::string name, std::vector<std::string> labels, std::span<const Link> links);

  const std::string& name() const noexcept { return name_; }
  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t link_count() const noexcept { return edges_.size() / 2; }

  const DirEdge& edge(EdgeId id) const { return edges_.at(id); }
  std::span<const DirEdge> edges() const noexcept { return edges_; }
  std::span<const EdgeId> out_edges(NodeId node) const { return out_.at(node); }
  std::optional<EdgeId> find_edge(NodeId tail, NodeId head) const;

  const std::string& label(NodeId node) const { return labels_.at(node); }
  const BuildStats& build_stats() const noexcept { return stats_; }

  bool contains(NodeId node) const noexcept { return node < labels_.size(); }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<DirEdge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  BuildStats stats_;
};

/// Simple directed path. `edges` index into the owning topology.
struct Path {
  NodeId src{};
  NodeId dst{};
  std::vector<EdgeId> edges;

  std::uint32_t hops() const noexcept { return static_cast<std::uint32_t>(edges.size()); }

  friend bool operator==(const Path&, const Path&) = default;
};

/// Throws PreconditionError unless `path` is contiguous, simple and src != dst.
void validate_path(const Topology& topo, const Path& path);

Path path_from_nodes(const Topology& topo, std::span<const NodeId> nodes);
std::vector<NodeId> path_nodes(const Topology& topo, const Path& path);

/// "a>b>c" using node ids.
std::string format_path(const Topology& topo, const Path& path);

/// Hop distance from every node to `target` (kUnreachable where none exists).
std::vector<std::uint32_t> hops_to(const Topology& topo, NodeId target);

/// Breadth-first hop count from `src` to `dst`.
/// Throws PreconditionError for src == dst or unknown nodes, NoPathError if unreachable.
std::uint32_t min_hop_distance(const Topology& topo, NodeId src, NodeId dst);

/// All simple paths src -> dst with at most `max_hops` edges, in depth-first
/// order with neighbours taken in ascending node id (lexicographic order of
/// the node sequences).
std::vector<Path> enumerate_paths(const Topology& topo, NodeId src, NodeId dst,
                                  std::uint32_t max_hops);

/// Number of simple src -> dst paths, counting stops once `cap` is reached.
std::uint64_t count_paths(const Topology& topo, NodeId src, NodeId dst, std::uint64_t cap);

/// Weakly connected components, each sorted, ordered by smallest member.
std::vector<std::vector<NodeId>> connected_components(const Topology& topo);

/// Directory searched for builtin topology files: $WANROUTE_DATA_DIR when set,
/// otherwise the data directory configured at build time.
std::filesystem::path data_dir();

/// Names accepted by builtin_topology().
std::span<const std::string_view> builtin_names();

/// gscale, agis, ans or cogent. Throws ConfigError for unknown names or a
/// missing data file.
Topology builtin_topology(std::string_view name);

/// A builtin name, or a path to a `.gml` file or an edge-list file.
Topology load_topology(std::string_view name_or_path);

}  // namespace wanroute
