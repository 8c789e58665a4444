#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "wanroute/flowstate.hpp"
#include "wanroute/routing.hpp"
#include "wanroute/topology.hpp"
#include "wanroute/traffic.hpp"

namespace wanroute {

/// Per-slot transmission priority.
///  fcfs: ascending (arrival_slot, id)
///  srpt: ascending (remaining, arrival_slot, id)
///  fair: ascending (delivered, arrival_slot, id), i.e. least served first,
///        the unit-granularity stand-in for max-min fair sharing.
enum class Policy { fcfs, srpt, fair };

std::string_view to_string(Policy policy);
Policy parse_policy(std::string_view text);

struct SlotOutcome {
  Slot slot{};
  std::vector<FlowId> transmitted;  ///< in priority order
  std::vector<FlowId> completed;
  std::vector<EdgeId> edges_used;

  friend bool operator==(const SlotOutcome&, const SlotOutcome&) = default;
};

std::vector<FlowId> priority_order(Policy policy, std::span<const Flow* const> active);

/// Unfinished flows of `index`, ascending id.
std::vector<const Flow*> active_flows(const FlowIndex& index);

/// Walks the active flows in priority order and lets a flow send one data
/// unit iff none of its edges was already claimed in this slot. The chosen set
/// is edge-disjoint and every skipped flow conflicts with a chosen one.
SlotOutcome schedule_slot(const Topology& topo, FlowIndex& index, Policy policy, Slot slot);

struct AdmissionRecord {
  FlowId id{};
  RouteResult route;  ///< route.weight is the path weight at admission
};

/// Stop rules for Engine::run_until(). The run also ends once no flow is
/// active and no arrival is pending.
struct RunLimit {
  std::optional<Slot> horizon;          ///< process slots [start, horizon)
  bool stop_after_last_admission = false;
};

/// Slotted simulation of one scheme and policy over one arrival stream.
///
/// Each slot first admits that slot's arrivals in order, routing each on the
/// state left by the previous one, then runs schedule_slot(). Slots with no
/// active flow are skipped and produce no SlotOutcome.
class Engine {
 public:
  /// Called before a routed flow is admitted, with the snapshot it was routed on.
  using RouteObserver =
      std::function<void(const FlowIndex& snapshot, const RouteRequest&, const RouteResult&)>;

  Engine(const Topology& topo, Scheme scheme, Policy policy, std::uint64_t route_seed = 0);

  /// Appends arrivals; they must be sorted by slot and not precede now().
  void add_arrivals(std::span<const ArrivalEvent> arrivals);
  void set_route_observer(RouteObserver observer) { observer_ = std::move(observer); }

  std::vector<SlotOutcome> run_until(const RunLimit& limit);

  const Topology& topology() const noexcept { return topo_; }
  const FlowIndex& flows() const noexcept { return index_; }
  std::span<const AdmissionRecord> admissions() const noexcept { return admissions_; }
  Slot now() const noexcept { return now_; }
  std::size_t pending_arrivals() const noexcept { return pending_.size(); }

 private:
  void admit_arrivals();

  const Topology& topo_;
  Scheme scheme_;
  Policy policy_;
  std::mt19937_64 rng_;
  FlowIndex index_;
  std::deque<ArrivalEvent> pending_;
  std::vector<AdmissionRecord> admissions_;
  RouteObserver observer_;
  Slot now_ = 0;
  FlowId next_id_ = 0;
};

}  // namespace wanroute
