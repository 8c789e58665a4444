#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wanroute/flowstate.hpp"

namespace wanroute {

enum class SizeDistribution { exponential, pareto };

std::string_view to_string(SizeDistribution dist);
/// "exp"/"exponential" or "pareto". Throws ConfigError otherwise.
SizeDistribution parse_distribution(std::string_view text);

struct TrafficConfig {
  double lambda = 1.0;  ///< mean arrivals per slot
  double mu = 50.0;     ///< mean flow size in data units
  SizeDistribution dist = SizeDistribution::exponential;
  Units max_size = 500;
  /// 0 selects the distribution default: 1 for exponential, 2 for Pareto
  /// (where it is also the Pareto scale).
  Units min_size = 0;
  std::uint64_t seed = 1;

  Units effective_min_size() const noexcept {
    if (min_size > 0) return min_size;
    return dist == SizeDistribution::pareto ? 2 : 1;
  }
};

/// Throws ConfigError unless lambda > 0, min <= mu <= max, and (Pareto) mu > scale.
void validate(const TrafficConfig& cfg);

struct ArrivalEvent {
  Slot arrival_slot{};
  NodeId src{};
  NodeId dst{};
  Units volume{};

  friend bool operator==(const ArrivalEvent&, const ArrivalEvent&) = default;
};

/// Generation stops at whichever limit is reached first; at least one must be set.
struct ArrivalStop {
  std::optional<std::size_t> max_arrivals;
  std::optional<Slot> horizon;  ///< slots [0, horizon)
};

/// Shape giving an untruncated Pareto mean of `mu` for scale `scale`.
double pareto_shape(double mu, double scale);

/// One flow size: the continuous draw is rounded to the nearest integer and
/// clamped to [min_size, max_size].
Units sample_size(const TrafficConfig& cfg, std::mt19937_64& rng);

/// Poisson(lambda) arrivals per slot, endpoints uniform over ordered pairs of
/// distinct nodes, sizes from sample_size(). Deterministic in cfg.seed.
std::vector<ArrivalEvent> gen_arrivals(const TrafficConfig& cfg, std::size_t node_count,
                                       const ArrivalStop& stop);

/// Seed for replica `replica` of a run seeded with `base`:
/// splitmix64(base XOR replica).
std::uint64_t replica_seed(std::uint64_t base, std::uint64_t replica);

/// `slot,src,dst,volume` CSV with a header row. Lines in `comment` are written
/// first, each prefixed by "# ".
void write_trace(std::ostream& out, std::span<const ArrivalEvent> events,
                 std::string_view comment = {});
/// Inverse of write_trace(); skips '#' lines and the header. Throws ParseError.
std::vector<ArrivalEvent> read_trace(std::istream& in);

}  // namespace wanroute
