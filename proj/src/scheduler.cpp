#include "wanroute/scheduler.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "wanroute/error.hpp"

namespace wanroute {

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::fcfs: return "fcfs";
    case Policy::srpt: return "srpt";
    case Policy::fair: return "fair";
  }
  return "unknown";
}

Policy parse_policy(std::string_view text) {
  for (auto p : {Policy::fcfs, Policy::srpt, Policy::fair}) {
    if (to_string(p) == text) return p;
  }
  throw ConfigError("unknown policy '" + std::string(text) + "' (valid: fcfs, srpt, fair)");
}

std::vector<FlowId> priority_order(Policy policy, std::span<const Flow* const> active) {
  std::vector<const Flow*> sorted(active.begin(), active.end());
  const auto key = [policy](const Flow* f) {
    switch (policy) {
      case Policy::srpt: return std::tuple(f->remaining, f->arrival_slot, f->id);
      case Policy::fair: return std::tuple(f->delivered, f->arrival_slot, f->id);
      case Policy::fcfs: break;
    }
    return std::tuple(Units{0}, f->arrival_slot, f->id);
  };
  std::sort(sorted.begin(), sorted.end(),
            [&](const Flow* a, const Flow* b) { return key(a) < key(b); });
  std::vector<FlowId> order;
  order.reserve(sorted.size());
  for (const Flow* f : sorted) order.push_back(f->id);
  return order;
}

std::vector<const Flow*> active_flows(const FlowIndex& index) {
  std::vector<const Flow*> flows;
  flows.reserve(index.active().size());
  for (FlowId id : index.active()) flows.push_back(&index.flow(id));
  return flows;
}

SlotOutcome schedule_slot(const Topology& topo, FlowIndex& index, Policy policy, Slot slot) {
  SlotOutcome outcome;
  outcome.slot = slot;
  const auto active = active_flows(index);
  if (active.empty()) return outcome;

  std::vector<bool> claimed(topo.edge_count(), false);
  for (FlowId id : priority_order(policy, active)) {
    const auto& edges = index.flow(id).path->edges;
    const bool blocked =
        std::any_of(edges.begin(), edges.end(), [&](EdgeId e) { return claimed[e]; });
    if (blocked) continue;
    for (EdgeId e : edges) {
      claimed[e] = true;
      outcome.edges_used.push_back(e);
    }
    outcome.transmitted.push_back(id);
  }
  for (FlowId id : outcome.transmitted) {
    if (index.deliver_one(id, slot)) outcome.completed.push_back(id);
  }
  return outcome;
}

Engine::Engine(const Topology& topo, Scheme scheme, Policy policy, std::uint64_t route_seed)
    : topo_(topo), scheme_(scheme), policy_(policy), rng_(route_seed),
      index_(topo.edge_count()) {}

void Engine::add_arrivals(std::span<const ArrivalEvent> arrivals) {
  Slot last = pending_.empty() ? now_ : pending_.back().arrival_slot;
  for (const auto& ev : arrivals) {
    if (ev.arrival_slot < last) {
      throw PreconditionError("arrivals must be sorted and not precede the current slot");
    }
    if (!topo_.contains(ev.src) || !topo_.contains(ev.dst) || ev.src == ev.dst || ev.volume < 1) {
      throw PreconditionError("invalid arrival at slot " + std::to_string(ev.arrival_slot));
    }
    last = ev.arrival_slot;
    pending_.push_back(ev);
  }
}

void Engine::admit_arrivals() {
  while (!pending_.empty() && pending_.front().arrival_slot == now_) {
    const ArrivalEvent ev = pending_.front();
    pending_.pop_front();
    const RouteRequest req{ev.src, ev.dst, ev.volume};
    RouteResult result;
    try {
      result = route(scheme_, topo_, index_, req, rng_);
    } catch (const NoPathError& e) {
      throw NoPathError("cannot route arrival at slot " + std::to_string(ev.arrival_slot) + " (" +
                        std::to_string(ev.src) + "->" + std::to_string(ev.dst) + ", " +
                        std::to_string(ev.volume) + " units): " + e.what());
    }
    if (observer_) observer_(index_, req, result);

    Flow flow;
    flow.id = next_id_++;
    flow.src = ev.src;
    flow.dst = ev.dst;
    flow.arrival_slot = ev.arrival_slot;
    flow.volume = ev.volume;
    flow.remaining = ev.volume;
    index_.admit(flow, result.path);
    admissions_.push_back({flow.id, std::move(result)});
  }
}

std::vector<SlotOutcome> Engine::run_until(const RunLimit& limit) {
  std::vector<SlotOutcome> outcomes;
  for (;;) {
    if (limit.horizon && now_ >= *limit.horizon) break;
    if (limit.stop_after_last_admission && pending_.empty()) break;
    if (index_.active().empty()) {
      if (pending_.empty()) break;
      // Nothing can transmit before the next arrival.
      Slot next = pending_.front().arrival_slot;
      if (limit.horizon) next = std::min(next, *limit.horizon);
      if (next > now_) {
        now_ = next;
        continue;
      }
    }
    admit_arrivals();
    outcomes.push_back(schedule_slot(topo_, index_, policy_, now_));
    ++now_;
  }
  return outcomes;
}

}  // namespace wanroute
