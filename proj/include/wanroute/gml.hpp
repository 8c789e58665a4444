#pragma once

#include <istream>
#include <string>
#include <string_view>

#include "wanroute/topology.hpp"

namespace wanroute {

/// Reads the `graph [ node [ id .. label .. ] edge [ source .. target .. ] ]`
/// subset of GML. Unknown keys are skipped, node ids are remapped to dense
/// 0-based ids in input order, multi-edges and self-loops are dropped and
/// counted in Topology::build_stats(). Throws ParseError on malformed input.
///
/// `name` defaults to the graph's `Network` or `label` attribute.
Topology parse_gml(std::string_view text, std::string name = {});
Topology parse_gml(std::istream& in, std::string name = {});

/// Plain edge list: `#` comments, an optional `nodes N` line, then one
/// `a b` link per line with 0-based ids.
Topology parse_edge_list(std::string_view text, std::string name = {});

}  // namespace wanroute
