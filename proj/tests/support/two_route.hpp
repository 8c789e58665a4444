#pragma once

// Nine-node two-route instance used as a golden test.
//
//        4           5
//        |           |
//   0 -- 1 --------- 2 -- 3        route A: 0>1>2>3   (3 hops)
//   |                     |
//   6 -- 7 ---- 8 --------+        route B: 0>6>7>8>3 (4 hops)
//
// Ongoing flows at the new flow's arrival:
//   F1  4>1>2>5    4 units left   shares 1>2 with route A
//   F2  0>6>7>8    3 units left   shares 0>6, 6>7, 7>8 with route B
//   F3  7>8>3      3 units left   shares 7>8, 8>3 with route B
// New flow: 0 -> 3, 3 units.

#include <array>
#include <string>
#include <vector>

#include "wanroute/flowstate.hpp"
#include "wanroute/topology.hpp"

namespace wanroute::testkit {

struct TwoRoute {
  static constexpr NodeId kSrc = 0;
  static constexpr NodeId kDst = 3;
  static constexpr Units kNewVolume = 3;

  Topology topo;
  FlowIndex index;
  Path route_a;
  Path route_b;

  TwoRoute() : topo(make_topology()), index(topo.edge_count()) {
    const std::array<NodeId, 4> a{0, 1, 2, 3};
    const std::array<NodeId, 5> b{0, 6, 7, 8, 3};
    route_a = path_from_nodes(topo, a);
    route_b = path_from_nodes(topo, b);
    add({4, 1, 2, 5}, 4);
    add({0, 6, 7, 8}, 3);
    add({7, 8, 3}, 3);
  }

  static Topology make_topology() {
    const std::vector<Link> links{{0, 1}, {1, 2}, {2, 3}, {1, 4}, {2, 5},
                                  {0, 6}, {6, 7}, {7, 8}, {8, 3}};
    std::vector<std::string> labels;
    for (int i = 0; i < 9; ++i) labels.push_back("n" + std::to_string(i));
    return Topology("two-route", labels, links);
  }

  void add(const std::vector<NodeId>& nodes, Units volume) {
    Flow f;
    f.id = index.id_bound();
    f.src = nodes.front();
    f.dst = nodes.back();
    f.volume = volume;
    f.remaining = volume;
    index.admit(std::move(f), path_from_nodes(topo, nodes));
  }
};

}  // namespace wanroute::testkit
