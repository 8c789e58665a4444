#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wanroute/flowstate.hpp"

namespace wanroute {

struct FlowOutcome {
  FlowId id{};
  NodeId src{};
  NodeId dst{};
  Slot arrival_slot{};
  Units volume{};
  std::uint32_t hops{};
  std::optional<Slot> finish_slot;
  std::optional<Units> fct;
};

/// Outcome rows for every flow in `index`, ascending id.
std::vector<FlowOutcome> collect_outcomes(const FlowIndex& index);

struct RunReport {
  std::vector<FlowOutcome> per_flow;
  std::size_t completed_count = 0;
  std::size_t incomplete_count = 0;
  // FCT statistics over completed flows; absent when none completed.
  std::optional<double> mean_fct;
  std::optional<double> tail_fct_p99;
  std::optional<double> tail_fct_max;
  std::optional<double> gap_mean;
  std::optional<double> gap_max;
  std::optional<double> route_latency_mean_ms;
  std::optional<double> route_latency_max_ms;
  nlohmann::json config_echo;
};

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value.
/// Throws PreconditionError on empty input or p outside (0, 100].
double nearest_rank(std::vector<double> values, double percentile);

RunReport summarize(std::vector<FlowOutcome> per_flow, std::span<const double> gaps,
                    std::span<const std::chrono::nanoseconds> latencies,
                    nlohmann::json config_echo = {});

/// Divides every value by the group minimum. Throws PreconditionError on an
/// empty group or a non-positive minimum.
std::vector<double> normalize_group(std::span<const double> values);

/// normalize_group() applied to each keyed group.
template <typename Key>
std::map<Key, std::vector<double>> normalize_groups(
    const std::map<Key, std::vector<double>>& groups) {
  std::map<Key, std::vector<double>> out;
  for (const auto& [key, values] : groups) out.emplace(key, normalize_group(values));
  return out;
}

struct ReplicaStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation; 0 for a single value
};

ReplicaStats replica_stats(std::span<const double> values);

/// Aggregate fields only (no per-flow rows).
nlohmann::json to_json(const RunReport& report);
nlohmann::json to_json(const ReplicaStats& stats);

}  // namespace wanroute
