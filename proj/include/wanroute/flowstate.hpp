#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wanroute/topology.hpp"

namespace wanroute {

using FlowId = std::uint32_t;
using Slot = std::int64_t;
using Units = std::int64_t;  ///< data units

struct Flow {
  FlowId id{};
  NodeId src{};
  NodeId dst{};
  Slot arrival_slot{};
  Units volume{};
  Units remaining{};
  Units delivered{};
  std::optional<Path> path;
  std::optional<Slot> finish_slot;

  bool finished() const noexcept { return finish_slot.has_value(); }
};

/// Time units from arrival to the slot carrying the last data unit,
/// counting both ends: finish_slot - arrival_slot + 1.
/// Throws PreconditionError for an unfinished flow.
Units completion_time(const Flow& flow);

/// Ongoing and finished flows plus, per directed edge, the ids of unfinished
/// flows whose path uses that edge.
class FlowIndex {
 public:
  FlowIndex() = default;
  explicit FlowIndex(std::size_t edge_count) : by_edge_(edge_count) {}

  /// Stores `flow` on `path` and indexes it on every path edge.
  void admit(Flow flow, Path path);

  /// One data unit of flow `id` is carried in `slot`. Returns true when this
  /// was the flow's last unit.
  bool deliver_one(FlowId id, Slot slot);

  bool contains(FlowId id) const noexcept { return id < flows_.size() && flows_[id].has_value(); }
  const Flow& flow(FlowId id) const;
  Units remaining(FlowId id) const { return flows_[id]->remaining; }

  /// Unfinished flows on `edge`, ascending id.
  std::span<const FlowId> flows_on(EdgeId edge) const { return by_edge_.at(edge); }

  /// Unfinished flow ids, ascending.
  std::span<const FlowId> active() const noexcept { return active_; }

  std::size_t edge_count() const noexcept { return by_edge_.size(); }
  std::size_t flow_count() const noexcept { return count_; }
  /// One past the largest id ever admitted.
  FlowId id_bound() const noexcept { return static_cast<FlowId>(flows_.size()); }

  template <typename Fn>
  void for_each_flow(Fn&& fn) const {
    for (const auto& f : flows_) {
      if (f) fn(*f);
    }
  }

  /// The per-edge sets recomputed from the stored flows alone.
  std::vector<std::vector<FlowId>> rebuild_edge_sets() const;
  bool consistent() const { return rebuild_edge_sets() == by_edge_; }

 private:
  std::vector<std::optional<Flow>> flows_;
  std::vector<std::vector<FlowId>> by_edge_;
  std::vector<FlowId> active_;
  std::size_t count_ = 0;
};

}  // namespace wanroute
