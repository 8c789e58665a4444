#include "wanroute/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wanroute/error.hpp"

namespace wanroute {

std::vector<FlowOutcome> collect_outcomes(const FlowIndex& index) {
  std::vector<FlowOutcome> rows;
  index.for_each_flow([&](const Flow& f) {
    FlowOutcome row;
    row.id = f.id;
    row.src = f.src;
    row.dst = f.dst;
    row.arrival_slot = f.arrival_slot;
    row.volume = f.volume;
    row.hops = f.path ? f.path->hops() : 0;
    row.finish_slot = f.finish_slot;
    if (f.finished()) row.fct = completion_time(f);
    rows.push_back(row);
  });
  return rows;
}

double nearest_rank(std::vector<double> values, double percentile) {
  if (values.empty()) throw PreconditionError("percentile of an empty set");
  if (!(percentile > 0.0 && percentile <= 100.0)) {
    throw PreconditionError("percentile must lie in (0, 100]");
  }
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  // Integer percentiles over integer counts are exact; the epsilon guards
  // products such as 0.99 * 100 landing just above an integer.
  auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

namespace {

double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace

RunReport summarize(std::vector<FlowOutcome> per_flow, std::span<const double> gaps,
                    std::span<const std::chrono::nanoseconds> latencies,
                    nlohmann::json config_echo) {
  RunReport report;
  std::vector<double> fcts;
  for (const auto& row : per_flow) {
    if (row.fct) {
      fcts.push_back(static_cast<double>(*row.fct));
    } else {
      ++report.incomplete_count;
    }
  }
  report.completed_count = fcts.size();
  if (!fcts.empty()) {
    // Sorting first makes the floating-point sum independent of row order.
    std::sort(fcts.begin(), fcts.end());
    report.mean_fct = mean_of(fcts);
    report.tail_fct_p99 = nearest_rank(fcts, 99.0);
    report.tail_fct_max = fcts.back();
  }
  if (!gaps.empty()) {
    std::vector<double> sorted(gaps.begin(), gaps.end());
    std::sort(sorted.begin(), sorted.end());
    report.gap_mean = mean_of(sorted);
    report.gap_max = sorted.back();
  }
  if (!latencies.empty()) {
    std::vector<double> ms;
    ms.reserve(latencies.size());
    for (auto d : latencies) ms.push_back(std::chrono::duration<double, std::milli>(d).count());
    std::sort(ms.begin(), ms.end());
    report.route_latency_mean_ms = mean_of(ms);
    report.route_latency_max_ms = ms.back();
  }
  report.per_flow = std::move(per_flow);
  report.config_echo = std::move(config_echo);
  return report;
}

std::vector<double> normalize_group(std::span<const double> values) {
  if (values.empty()) throw PreconditionError("cannot normalize an empty group");
  const double lowest = *std::min_element(values.begin(), values.end());
  if (!(lowest > 0.0)) throw PreconditionError("group minimum must be positive");
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(v / lowest);
  return out;
}

ReplicaStats replica_stats(std::span<const double> values) {
  ReplicaStats stats;
  stats.count = values.size();
  if (values.empty()) return stats;
  stats.mean = mean_of(values);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return stats;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const RunReport& report) {
  return {
      {"flows", report.per_flow.size()},
      {"completed", report.completed_count},
      {"incomplete", report.incomplete_count},
      {"mean_fct", optional_json(report.mean_fct)},
      {"p99_fct", optional_json(report.tail_fct_p99)},
      {"max_fct", optional_json(report.tail_fct_max)},
      {"gap_mean", optional_json(report.gap_mean)},
      {"gap_max", optional_json(report.gap_max)},
      {"route_latency_mean_ms", optional_json(report.route_latency_mean_ms)},
      {"route_latency_max_ms", optional_json(report.route_latency_max_ms)},
  };
}

nlohmann::json to_json(const ReplicaStats& stats) {
  return {{"n", stats.count}, {"mean", stats.mean}, {"stddev", stats.stddev}};
}

}  // namespace wanroute
