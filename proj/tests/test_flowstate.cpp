#include <gtest/gtest.h>

#include <random>

#include "support/two_route.hpp"
#include "wanroute/error.hpp"
#include "wanroute/flowstate.hpp"

using namespace wanroute;
using testkit::TwoRoute;

namespace {

Flow fresh(FlowId id, NodeId src, NodeId dst, Units volume, Slot arrival = 0) {
  Flow f;
  f.id = id;
  f.src = src;
  f.dst = dst;
  f.volume = volume;
  f.remaining = volume;
  f.arrival_slot = arrival;
  return f;
}

}  // namespace

TEST(FlowIndex, AdmitIndexesEveryEdge) {
  TwoRoute fx;
  const auto e12 = *fx.topo.find_edge(1, 2);
  const auto e78 = *fx.topo.find_edge(7, 8);
  EXPECT_EQ(std::vector<FlowId>(fx.index.flows_on(e12).begin(), fx.index.flows_on(e12).end()),
            std::vector<FlowId>{0});
  EXPECT_EQ(std::vector<FlowId>(fx.index.flows_on(e78).begin(), fx.index.flows_on(e78).end()),
            (std::vector<FlowId>{1, 2}));
  EXPECT_EQ(fx.index.active().size(), 3u);
  EXPECT_TRUE(fx.index.consistent());
}

TEST(FlowIndex, DeliverUntilDone) {
  TwoRoute fx;
  EXPECT_FALSE(fx.index.deliver_one(1, 0));
  EXPECT_FALSE(fx.index.deliver_one(1, 1));
  EXPECT_EQ(fx.index.remaining(1), 1);
  EXPECT_EQ(fx.index.flow(1).delivered, 2);
  EXPECT_TRUE(fx.index.deliver_one(1, 5));
  EXPECT_EQ(fx.index.flow(1).finish_slot, 5);
  EXPECT_EQ(fx.index.active().size(), 2u);
  EXPECT_TRUE(fx.index.flows_on(*fx.topo.find_edge(0, 6)).empty());
  EXPECT_TRUE(fx.index.consistent());
  EXPECT_THROW(fx.index.deliver_one(1, 6), PreconditionError);
}

TEST(FlowIndex, AdmitRejectsBadFlows) {
  TwoRoute fx;
  const auto p = fx.route_a;
  EXPECT_THROW(fx.index.admit(fresh(0, 0, 3, 2), p), PreconditionError);  // duplicate id
  EXPECT_THROW(fx.index.admit(fresh(9, 0, 2, 2), p), PreconditionError);  // endpoint mismatch
  EXPECT_THROW(fx.index.admit(fresh(9, 0, 3, 0), p), PreconditionError);  // empty flow
  Flow used = fresh(9, 0, 3, 2);
  used.remaining = 1;
  EXPECT_THROW(fx.index.admit(used, p), PreconditionError);
  EXPECT_THROW(fx.index.admit(fresh(9, 0, 3, 2), Path{0, 3, {}}), PreconditionError);
  FlowIndex tiny(2);
  EXPECT_THROW(tiny.admit(fresh(0, 0, 3, 2), p), PreconditionError);
}

TEST(FlowIndex, UnknownFlow) {
  FlowIndex idx(4);
  EXPECT_FALSE(idx.contains(0));
  EXPECT_THROW(idx.flow(0), PreconditionError);
  EXPECT_THROW(idx.deliver_one(3, 0), PreconditionError);
}

TEST(CompletionTime, CountsBothEnds) {
  Flow f = fresh(0, 0, 1, 3, 10);
  EXPECT_THROW(completion_time(f), PreconditionError);
  f.finish_slot = 12;
  EXPECT_EQ(completion_time(f), 3);
}

TEST(FlowIndex, RandomDeliveriesStayConsistent) {
  TwoRoute fx;
  std::mt19937_64 rng(3);
  Units total = 0;
  fx.index.for_each_flow([&](const Flow& f) { total += f.remaining; });
  Slot t = 0;
  while (!fx.index.active().empty()) {
    const auto active = fx.index.active();
    const FlowId id = active[std::uniform_int_distribution<std::size_t>(0, active.size() - 1)(rng)];
    fx.index.deliver_one(id, t++);
    ASSERT_TRUE(fx.index.consistent());
    Units left = 0;
    Units sent = 0;
    fx.index.for_each_flow([&](const Flow& f) {
      left += f.remaining;
      sent += f.delivered;
      ASSERT_EQ(f.remaining + f.delivered, f.volume);
    });
    ASSERT_EQ(left + sent, total);
  }
  EXPECT_EQ(t, total);
}
