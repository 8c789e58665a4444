#pragma once

// Reference implementations written directly from the definitions, sharing
// nothing with the library beyond the Topology/FlowIndex containers they are
// fed from. Paths are node sequences; flows carry their own node sequences.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wanroute/flowstate.hpp"
#include "wanroute/topology.hpp"

namespace wanroute::testkit {

using Nodes = std::vector<NodeId>;

struct RefFlow {
  Nodes nodes;
  Units remaining = 0;
};

struct Instance {
  std::size_t n = 0;
  std::vector<Link> links;
  std::vector<RefFlow> flows;
  NodeId src = 0;
  NodeId dst = 0;
  Units volume = 1;

  Topology topology() const {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
    return Topology("instance", labels, links);
  }

  // Flows go in with their remaining size as the volume, which is all the
  // routing code looks at.
  FlowIndex index(const Topology& topo) const {
    FlowIndex idx(topo.edge_count());
    for (const auto& rf : flows) {
      Flow f;
      f.id = idx.id_bound();
      f.src = rf.nodes.front();
      f.dst = rf.nodes.back();
      f.volume = rf.remaining;
      f.remaining = rf.remaining;
      idx.admit(std::move(f), path_from_nodes(topo, rf.nodes));
    }
    return idx;
  }
};

class Reference {
 public:
  explicit Reference(const Instance& inst) : inst_(inst), adj_(inst.n, std::vector<bool>(inst.n)) {
    for (const auto& l : inst.links) {
      if (l.a == l.b) continue;
      adj_[l.a][l.b] = true;
      adj_[l.b][l.a] = true;
    }
  }

  /// Every simple path from s to t, lexicographic by node sequence.
  std::vector<Nodes> all_paths(NodeId s, NodeId t) const {
    std::vector<Nodes> out;
    Nodes cur{s};
    std::vector<bool> seen(inst_.n);
    seen[s] = true;
    walk(t, cur, seen, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Remaining units of the distinct flows sharing a directed edge with `p`.
  Units weight(const Nodes& p) const {
    std::set<std::pair<NodeId, NodeId>> edges;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) edges.insert({p[i], p[i + 1]});
    Units w = 0;
    for (const auto& f : inst_.flows) {
      for (std::size_t i = 0; i + 1 < f.nodes.size(); ++i) {
        if (edges.contains({f.nodes[i], f.nodes[i + 1]})) {
          w += f.remaining;
          break;
        }
      }
    }
    return w;
  }

  Units utilization(NodeId a, NodeId b) const {
    Units u = 0;
    for (const auto& f : inst_.flows) {
      for (std::size_t i = 0; i + 1 < f.nodes.size(); ++i) {
        if (f.nodes[i] == a && f.nodes[i + 1] == b) u += f.remaining;
      }
    }
    return u;
  }

  Units bottleneck(const Nodes& p) const {
    Units m = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) m = std::max(m, utilization(p[i], p[i + 1]));
    return m;
  }

  static std::size_t hops(const Nodes& p) { return p.size() - 1; }

  /// Best path under `key` among `paths` with at most `max_hops` hops;
  /// ties to fewer hops, then lexicographic order.
  template <typename Key>
  static std::optional<Nodes> best(const std::vector<Nodes>& paths, std::size_t max_hops,
                                   Key key) {
    std::optional<Nodes> winner;
    for (const auto& p : paths) {
      if (hops(p) > max_hops) continue;
      if (!winner) {
        winner = p;
        continue;
      }
      const auto kp = std::make_pair(key(p), hops(p));
      const auto kw = std::make_pair(key(*winner), hops(*winner));
      if (kp < kw) winner = p;  // equal keys keep the earlier (lexicographically smaller) path
    }
    return winner;
  }

  Nodes optimal() const {
    const auto paths = all_paths(inst_.src, inst_.dst);
    return *best(paths, inst_.n, [&](const Nodes& p) { return weight(p); });
  }

  Nodes min_hop() const {
    const auto paths = all_paths(inst_.src, inst_.dst);
    return *best(paths, inst_.n, [](const Nodes&) { return 0; });
  }

  Nodes min_max_util() const {
    const auto paths = all_paths(inst_.src, inst_.dst);
    return *best(paths, inst_.n, [&](const Nodes& p) { return bottleneck(p); });
  }

  /// Iterative deepening as defined: W(K) is the least weight over paths of
  /// at most K hops; K grows from the minimum hop count while W(K) < W(K-1);
  /// the answer is the best path with at most K-1 hops.
  Nodes bwrh() const {
    const auto paths = all_paths(inst_.src, inst_.dst);
    const std::size_t k0 = hops(min_hop());
    auto w_at = [&](std::size_t k) {
      Units w = std::numeric_limits<Units>::max();
      for (const auto& p : paths) {
        if (hops(p) <= k) w = std::min(w, weight(p));
      }
      return w;
    };
    std::size_t k = k0 + 1;
    Units prev = w_at(k0);
    while (k <= inst_.n) {
      const Units cur = w_at(k);
      if (!(cur < prev)) break;
      prev = cur;
      ++k;
    }
    return *best(paths, k - 1, [&](const Nodes& p) { return weight(p); });
  }

  std::vector<Nodes> random_candidates() const {
    const auto paths = all_paths(inst_.src, inst_.dst);
    const std::size_t limit = hops(min_hop()) + 1;
    std::vector<Nodes> out;
    for (const auto& p : paths) {
      if (hops(p) <= limit) out.push_back(p);
    }
    return out;
  }

 private:
  void walk(NodeId t, Nodes& cur, std::vector<bool>& seen, std::vector<Nodes>& out) const {
    const NodeId v = cur.back();
    if (v == t) {
      out.push_back(cur);
      return;
    }
    for (NodeId w = 0; w < inst_.n; ++w) {
      if (!adj_[v][w] || seen[w]) continue;
      seen[w] = true;
      cur.push_back(w);
      walk(t, cur, seen, out);
      cur.pop_back();
      seen[w] = false;
    }
  }

  const Instance& inst_;
  std::vector<std::vector<bool>> adj_;
};

/// Random connected-enough instance: up to `max_nodes` nodes, up to
/// `max_flows` ongoing flows on random simple paths, and a reachable request.
inline Instance random_instance(std::mt19937_64& rng, std::size_t max_nodes = 8,
                                std::size_t max_flows = 12) {
  std::uniform_int_distribution<std::size_t> n_dist(2, max_nodes);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (;;) {
    Instance inst;
    inst.n = n_dist(rng);
    const double density = 0.25 + 0.6 * coin(rng);
    for (NodeId a = 0; a < inst.n; ++a) {
      for (NodeId b = a + 1; b < inst.n; ++b) {
        if (coin(rng) < density) inst.links.push_back({a, b});
      }
    }
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(inst.n - 1));
    inst.src = node(rng);
    do inst.dst = node(rng);
    while (inst.dst == inst.src);
    Reference ref(inst);
    if (ref.all_paths(inst.src, inst.dst).empty()) continue;

    const std::size_t flows = std::uniform_int_distribution<std::size_t>(0, max_flows)(rng);
    for (std::size_t i = 0; i < flows; ++i) {
      const NodeId s = node(rng);
      const NodeId t = node(rng);
      if (s == t) continue;
      const auto paths = ref.all_paths(s, t);
      if (paths.empty()) continue;
      RefFlow f;
      f.nodes = paths[std::uniform_int_distribution<std::size_t>(0, paths.size() - 1)(rng)];
      f.remaining = std::uniform_int_distribution<Units>(1, 20)(rng);
      inst.flows.push_back(std::move(f));
    }
    inst.volume = std::uniform_int_distribution<Units>(1, 20)(rng);
    return inst;
  }
}

/// Mean of an exponential(mean mu) draw rounded to the nearest integer and
/// clamped to [lo, hi], summed exactly over the integer outcomes.
inline double truncated_exponential_mean(double mu, Units lo, Units hi) {
  auto cdf = [mu](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / mu); };
  double mean = 0.0;
  for (Units k = lo; k <= hi; ++k) {
    const double from = k == lo ? 0.0 : static_cast<double>(k) - 0.5;
    const double p = k == hi ? 1.0 - cdf(from) : cdf(static_cast<double>(k) + 0.5) - cdf(from);
    mean += static_cast<double>(k) * p;
  }
  return mean;
}

/// Slot-by-slot reference scheduler. Each slot every unfinished, arrived
/// flow is considered in `less` order and sends a unit if none of its edges
/// is taken yet. Returns per-flow finish slots.
struct SimFlow {
  Nodes nodes;
  Slot arrival = 0;
  Units volume = 0;
};

enum class RefPolicy { fcfs, srpt, fair };

inline std::vector<Slot> reference_schedule(const std::vector<SimFlow>& flows, RefPolicy policy) {
  const std::size_t m = flows.size();
  std::vector<Units> left(m), sent(m, 0);
  std::vector<Slot> finish(m, -1);
  for (std::size_t i = 0; i < m; ++i) left[i] = flows[i].volume;
  std::size_t done = 0;
  for (Slot t = 0; done < m; ++t) {
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < m; ++i) {
      if (flows[i].arrival <= t && left[i] > 0) ready.push_back(i);
    }
    auto key = [&](std::size_t i) {
      const Units primary = policy == RefPolicy::srpt ? left[i]
                            : policy == RefPolicy::fair ? sent[i]
                                                        : 0;
      return std::make_tuple(primary, flows[i].arrival, i);
    };
    std::sort(ready.begin(), ready.end(),
              [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    std::set<std::pair<NodeId, NodeId>> taken;
    std::vector<std::size_t> go;
    for (std::size_t i : ready) {
      const auto& p = flows[i].nodes;
      bool free = true;
      for (std::size_t k = 0; k + 1 < p.size(); ++k) free = free && !taken.contains({p[k], p[k + 1]});
      if (!free) continue;
      for (std::size_t k = 0; k + 1 < p.size(); ++k) taken.insert({p[k], p[k + 1]});
      go.push_back(i);
    }
    for (std::size_t i : go) {
      --left[i];
      ++sent[i];
      if (left[i] == 0) {
        finish[i] = t;
        ++done;
      }
    }
  }
  return finish;
}

}  // namespace wanroute::testkit
