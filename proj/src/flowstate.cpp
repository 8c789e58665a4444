#include "wanroute/flowstate.hpp"

#include <algorithm>
#include <string>

#include "wanroute/error.hpp"

namespace wanroute {

Units completion_time(const Flow& flow) {
  if (!flow.finish_slot) {
    throw PreconditionError("flow " + std::to_string(flow.id) + " has not finished");
  }
  return *flow.finish_slot - flow.arrival_slot + 1;
}

namespace {

void erase_sorted(std::vector<FlowId>& ids, FlowId id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it != ids.end() && *it == id) ids.erase(it);
}

void insert_sorted(std::vector<FlowId>& ids, FlowId id) {
  ids.insert(std::lower_bound(ids.begin(), ids.end(), id), id);
}

}  // namespace

void FlowIndex::admit(Flow flow, Path path) {
  const auto id_text = std::to_string(flow.id);
  if (contains(flow.id)) throw PreconditionError("flow id " + id_text + " already admitted");
  if (path.src != flow.src || path.dst != flow.dst) {
    throw PreconditionError("path endpoints do not match flow " + id_text);
  }
  if (flow.volume < 1) throw PreconditionError("flow " + id_text + " has no data");
  if (flow.remaining != flow.volume || flow.delivered != 0 || flow.finish_slot) {
    throw PreconditionError("flow " + id_text + " is not fresh");
  }
  if (path.edges.empty()) throw PreconditionError("flow " + id_text + " has an empty path");
  for (EdgeId e : path.edges) {
    if (e >= by_edge_.size()) throw PreconditionError("path edge outside the topology");
  }

  for (EdgeId e : path.edges) insert_sorted(by_edge_[e], flow.id);
  insert_sorted(active_, flow.id);
  if (flow.id >= flows_.size()) flows_.resize(flow.id + 1);
  flow.path = std::move(path);
  flows_[flow.id] = std::move(flow);
  ++count_;
}

const Flow& FlowIndex::flow(FlowId id) const {
  if (!contains(id)) throw PreconditionError("unknown flow id " + std::to_string(id));
  return *flows_[id];
}

bool FlowIndex::deliver_one(FlowId id, Slot slot) {
  if (!contains(id)) throw PreconditionError("unknown flow id " + std::to_string(id));
  Flow& f = *flows_[id];
  if (f.remaining < 1) {
    throw PreconditionError("flow " + std::to_string(id) + " already finished");
  }
  --f.remaining;
  ++f.delivered;
  if (f.remaining > 0) return false;

  f.finish_slot = slot;
  for (EdgeId e : f.path->edges) erase_sorted(by_edge_[e], id);
  erase_sorted(active_, id);
  return true;
}

std::vector<std::vector<FlowId>> FlowIndex::rebuild_edge_sets() const {
  std::vector<std::vector<FlowId>> sets(by_edge_.size());
  for (const auto& f : flows_) {
    if (!f || f->remaining == 0) continue;
    for (EdgeId e : f->path->edges) sets[e].push_back(f->id);
  }
  for (auto& s : sets) std::sort(s.begin(), s.end());
  return sets;
}

}  // namespace wanroute
