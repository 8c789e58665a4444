#include "wanroute/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "wanroute/error.hpp"

namespace wanroute {

std::string_view to_string(SizeDistribution dist) {
  return dist == SizeDistribution::pareto ? "pareto" : "exp";
}

SizeDistribution parse_distribution(std::string_view text) {
  if (text == "exp" || text == "exponential") return SizeDistribution::exponential;
  if (text == "pareto") return SizeDistribution::pareto;
  throw ConfigError("unknown size distribution '" + std::string(text) + "' (valid: exp, pareto)");
}

void validate(const TrafficConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw ConfigError("lambda must be positive");
  const auto lo = static_cast<double>(cfg.effective_min_size());
  if (cfg.max_size < cfg.effective_min_size()) throw ConfigError("max_size below min_size");
  if (!(cfg.mu >= lo && cfg.mu <= static_cast<double>(cfg.max_size))) {
    throw ConfigError("mu must lie in [min_size, max_size]");
  }
  if (cfg.dist == SizeDistribution::pareto && !(cfg.mu > lo)) {
    throw ConfigError("Pareto sizes need mu above the scale " + std::to_string(lo));
  }
}

double pareto_shape(double mu, double scale) { return mu / (mu - scale); }

Units sample_size(const TrafficConfig& cfg, std::mt19937_64& rng) {
  const Units lo = cfg.effective_min_size();
  double draw = 0.0;
  if (cfg.dist == SizeDistribution::exponential) {
    draw = std::exponential_distribution<double>(1.0 / cfg.mu)(rng);
  } else {
    if (!(cfg.mu > static_cast<double>(lo))) {
      throw ConfigError("Pareto sizes need mu above the scale " + std::to_string(lo));
    }
    const double shape = pareto_shape(cfg.mu, static_cast<double>(lo));
    // Inverse CDF; 1 - u lies in (0, 1].
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    draw = static_cast<double>(lo) / std::pow(1.0 - u, 1.0 / shape);
  }
  const double capped = std::min(draw, static_cast<double>(cfg.max_size));
  return std::clamp<Units>(std::llround(capped), lo, cfg.max_size);
}

std::vector<ArrivalEvent> gen_arrivals(const TrafficConfig& cfg, std::size_t node_count,
                                       const ArrivalStop& stop) {
  validate(cfg);
  if (node_count < 2) throw PreconditionError("traffic needs at least two nodes");
  if (!stop.max_arrivals && !stop.horizon) throw PreconditionError("no stop condition");
  if ((stop.max_arrivals && *stop.max_arrivals == 0) || (stop.horizon && *stop.horizon <= 0)) {
    throw PreconditionError("stop condition must be positive");
  }

  std::mt19937_64 rng(cfg.seed);
  std::poisson_distribution<std::int64_t> per_slot(cfg.lambda);
  std::uniform_int_distribution<NodeId> pick_src(0, static_cast<NodeId>(node_count - 1));
  // dst is drawn from the n-1 other nodes.
  std::uniform_int_distribution<NodeId> pick_dst(0, static_cast<NodeId>(node_count - 2));

  std::vector<ArrivalEvent> events;
  for (Slot slot = 0;; ++slot) {
    if (stop.horizon && slot >= *stop.horizon) break;
    const auto count = per_slot(rng);
    for (std::int64_t i = 0; i < count; ++i) {
      if (stop.max_arrivals && events.size() >= *stop.max_arrivals) return events;
      ArrivalEvent ev;
      ev.arrival_slot = slot;
      ev.src = pick_src(rng);
      ev.dst = pick_dst(rng);
      if (ev.dst >= ev.src) ++ev.dst;
      ev.volume = sample_size(cfg, rng);
      events.push_back(ev);
    }
    if (stop.max_arrivals && events.size() >= *stop.max_arrivals) break;
  }
  return events;
}

std::uint64_t replica_seed(std::uint64_t base, std::uint64_t replica) {
  std::uint64_t z = (base ^ replica) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void write_trace(std::ostream& out, std::span<const ArrivalEvent> events,
                 std::string_view comment) {
  std::istringstream lines{std::string(comment)};
  for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  out << "slot,src,dst,volume\n";
  for (const auto& ev : events) {
    out << ev.arrival_slot << ',' << ev.src << ',' << ev.dst << ',' << ev.volume << '\n';
  }
}

std::vector<ArrivalEvent> read_trace(std::istream& in) {
  std::vector<ArrivalEvent> events;
  std::size_t offset = 0;
  for (std::string line; std::getline(in, line);) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || line.rfind("slot,", 0) == 0) continue;
    std::istringstream fields(line);
    ArrivalEvent ev;
    char c1 = 0;
    char c2 = 0;
    char c3 = 0;
    long long src = -1;
    long long dst = -1;
    if (!(fields >> ev.arrival_slot >> c1 >> src >> c2 >> dst >> c3 >> ev.volume) || c1 != ',' ||
        c2 != ',' || c3 != ',' || src < 0 || dst < 0 || ev.volume < 1 || ev.arrival_slot < 0) {
      throw ParseError("malformed trace line '" + line + "'", line_offset);
    }
    ev.src = static_cast<NodeId>(src);
    ev.dst = static_cast<NodeId>(dst);
    if (!events.empty() && ev.arrival_slot < events.back().arrival_slot) {
      throw ParseError("trace is not sorted by slot", line_offset);
    }
    events.push_back(ev);
  }
  return events;
}

}  // namespace wanroute
