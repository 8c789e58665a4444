#include "wanroute/topology.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "wanroute/error.hpp"
#include "wanroute/gml.hpp"

namespace wanroute {

Topology::Topology(std::string name, std::vector<std::string> labels, std::span<const Link> links)
    : name_(std::move(name)), labels_(std::move(labels)) {
  const auto n = labels_.size();
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& link : links) {
    if (link.a >= n || link.b >= n) {
      throw PreconditionError("link " + std::to_string(link.a) + "-" + std::to_string(link.b) +
                              " references a node outside 0.." + std::to_string(n));
    }
    if (link.a == link.b) {
      ++stats_.self_loops;
      continue;
    }
    const auto key = std::minmax(link.a, link.b);
    if (!seen.insert(key).second) {
      ++stats_.duplicate_links;
      continue;
    }
    edges_.push_back({link.a, link.b});
    edges_.push_back({link.b, link.a});
  }
  std::sort(edges_.begin(), edges_.end());

  out_.resize(n);
  for (EdgeId id = 0; id < edges_.size(); ++id) out_[edges_[id].tail].push_back(id);
}

std::optional<EdgeId> Topology::find_edge(NodeId tail, NodeId head) const {
  if (!contains(tail)) return std::nullopt;
  for (EdgeId id : out_[tail]) {
    if (edges_[id].head == head) return id;
  }
  return std::nullopt;
}

void validate_path(const Topology& topo, const Path& path) {
  if (path.src == path.dst) throw PreconditionError("path source equals destination");
  if (path.edges.empty()) throw PreconditionError("path has no edges");
  std::vector<bool> visited(topo.node_count(), false);
  NodeId at = path.src;
  if (!topo.contains(at)) throw PreconditionError("path source is not a topology node");
  visited[at] = true;
  for (EdgeId id : path.edges) {
    if (id >= topo.edge_count()) throw PreconditionError("path references an unknown edge");
    const auto& e = topo.edge(id);
    if (e.tail != at) throw PreconditionError("path edges are not contiguous");
    if (visited[e.head]) throw PreconditionError("path repeats node " + std::to_string(e.head));
    visited[e.head] = true;
    at = e.head;
  }
  if (at != path.dst) throw PreconditionError("path does not end at its destination");
}

Path path_from_nodes(const Topology& topo, std::span<const NodeId> nodes) {
  if (nodes.size() < 2) throw PreconditionError("a path needs at least two nodes");
  Path path{nodes.front(), nodes.back(), {}};
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    auto id = topo.find_edge(nodes[i], nodes[i + 1]);
    if (!id) {
      throw PreconditionError("no edge " + std::to_string(nodes[i]) + "->" +
                              std::to_string(nodes[i + 1]));
    }
    path.edges.push_back(*id);
  }
  validate_path(topo, path);
  return path;
}

std::vector<NodeId> path_nodes(const Topology& topo, const Path& path) {
  std::vector<NodeId> nodes{path.src};
  for (EdgeId id : path.edges) nodes.push_back(topo.edge(id).head);
  return nodes;
}

std::string format_path(const Topology& topo, const Path& path) {
  std::string out;
  for (NodeId n : path_nodes(topo, path)) {
    if (!out.empty()) out += '>';
    out += std::to_string(n);
  }
  return out;
}

std::vector<std::uint32_t> hops_to(const Topology& topo, NodeId target) {
  // Links are bidirectional, so BFS over out-edges from the target gives the
  // distance *to* the target as well.
  std::vector<std::uint32_t> dist(topo.node_count(), kUnreachable);
  if (!topo.contains(target)) return dist;
  std::deque<NodeId> queue{target};
  dist[target] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (EdgeId id : topo.out_edges(u)) {
      const NodeId v = topo.edge(id).head;
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::uint32_t min_hop_distance(const Topology& topo, NodeId src, NodeId dst) {
  if (!topo.contains(src) || !topo.contains(dst)) throw PreconditionError("unknown node id");
  if (src == dst) throw PreconditionError("source equals destination");
  const auto d = hops_to(topo, dst)[src];
  if (d == kUnreachable) {
    throw NoPathError("no path from " + std::to_string(src) + " to " + std::to_string(dst));
  }
  return d;
}

namespace {

class PathWalker {
 public:
  PathWalker(const Topology& topo, NodeId dst, std::uint32_t max_hops)
      : topo_(topo), dst_(dst), max_hops_(max_hops), dist_(hops_to(topo, dst)),
        on_path_(topo.node_count(), false) {}

  template <typename Visit>
  void walk(NodeId src, Visit&& visit) {
    if (dist_[src] > max_hops_) return;
    stack_.clear();
    on_path_[src] = true;
    descend(src, visit);
    on_path_[src] = false;
  }

  const std::vector<EdgeId>& stack() const { return stack_; }

 private:
  // Returns false when the visitor asked to stop.
  template <typename Visit>
  bool descend(NodeId at, Visit& visit) {
    const auto depth = static_cast<std::uint32_t>(stack_.size());
    for (EdgeId id : topo_.out_edges(at)) {
      const NodeId next = topo_.edge(id).head;
      if (on_path_[next] || dist_[next] == kUnreachable) continue;
      if (depth + 1 + dist_[next] > max_hops_) continue;
      stack_.push_back(id);
      bool keep_going = true;
      if (next == dst_) {
        keep_going = visit(stack_);
      } else {
        on_path_[next] = true;
        keep_going = descend(next, visit);
        on_path_[next] = false;
      }
      stack_.pop_back();
      if (!keep_going) return false;
    }
    return true;
  }

  const Topology& topo_;
  NodeId dst_;
  std::uint32_t max_hops_;
  std::vector<std::uint32_t> dist_;
  std::vector<bool> on_path_;
  std::vector<EdgeId> stack_;
};

void check_endpoints(const Topology& topo, NodeId src, NodeId dst) {
  if (!topo.contains(src) || !topo.contains(dst)) throw PreconditionError("unknown node id");
  if (src == dst) throw PreconditionError("source equals destination");
}

}  // namespace

std::vector<Path> enumerate_paths(const Topology& topo, NodeId src, NodeId dst,
                                  std::uint32_t max_hops) {
  check_endpoints(topo, src, dst);
  if (max_hops < 1) throw PreconditionError("max_hops must be at least 1");
  std::vector<Path> paths;
  PathWalker walker(topo, dst, max_hops);
  walker.walk(src, [&](const std::vector<EdgeId>& edges) {
    paths.push_back(Path{src, dst, edges});
    return true;
  });
  return paths;
}

std::uint64_t count_paths(const Topology& topo, NodeId src, NodeId dst, std::uint64_t cap) {
  check_endpoints(topo, src, dst);
  std::uint64_t count = 0;
  PathWalker walker(topo, dst, static_cast<std::uint32_t>(topo.node_count()));
  walker.walk(src, [&](const std::vector<EdgeId>&) { return ++count < cap; });
  return count;
}

std::vector<std::vector<NodeId>> connected_components(const Topology& topo) {
  std::vector<std::vector<NodeId>> components;
  std::vector<bool> seen(topo.node_count(), false);
  for (NodeId start = 0; start < topo.node_count(); ++start) {
    if (seen[start]) continue;
    std::vector<NodeId> members;
    std::deque<NodeId> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      members.push_back(u);
      for (EdgeId id : topo.out_edges(u)) {
        const NodeId v = topo.edge(id).head;
        if (!seen[v]) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  return components;
}

#ifndef WANROUTE_DEFAULT_DATA_DIR
#define WANROUTE_DEFAULT_DATA_DIR "data/topologies"
#endif

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("WANROUTE_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return WANROUTE_DEFAULT_DATA_DIR;
}

namespace {

constexpr std::array<std::string_view, 4> kBuiltinNames{"gscale", "agis", "ans", "cogent"};

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open topology file " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::span<const std::string_view> builtin_names() { return kBuiltinNames; }

Topology builtin_topology(std::string_view name) {
  struct Entry {
    std::string_view name;
    std::string_view file;
  };
  static constexpr std::array<Entry, 4> entries{{
      {"gscale", "gscale.txt"},
      {"agis", "Agis.gml"},
      {"ans", "Ans.gml"},
      {"cogent", "Cogentco.gml"},
  }};
  for (const auto& entry : entries) {
    if (entry.name != name) continue;
    const auto file = data_dir() / entry.file;
    if (!std::filesystem::exists(file)) {
      throw ConfigError("topology '" + std::string(name) + "' needs " + file.string() +
                        ", which is not present; download it from "
                        "http://www.topology-zoo.org/files/" + std::string(entry.file) +
                        " or set WANROUTE_DATA_DIR");
    }
    const auto text = read_file(file);
    if (file.extension() == ".gml") return parse_gml(text, std::string(name));
    return parse_edge_list(text, std::string(name));
  }
  std::string valid;
  for (auto n : kBuiltinNames) valid += (valid.empty() ? "" : ", ") + std::string(n);
  throw ConfigError("unknown topology '" + std::string(name) + "' (valid names: " + valid + ")");
}

Topology load_topology(std::string_view name_or_path) {
  for (auto n : kBuiltinNames) {
    if (n == name_or_path) return builtin_topology(name_or_path);
  }
  const std::filesystem::path file{std::string(name_or_path)};
  if (!std::filesystem::exists(file)) {
    // Routes unknown names through the builtin lookup for its error message.
    return builtin_topology(name_or_path);
  }
  const auto text = read_file(file);
  if (file.extension() == ".gml") return parse_gml(text, file.stem().string());
  return parse_edge_list(text, file.stem().string());
}

}  // namespace wanroute
