#pragma once

#include "khsat/lts.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace khsat
{

// Model JSON:
//   {"states": [name...],
//    "relations": {"a": [[src, dst]...], ...},
//    "valuation": {"p": [name...], ...}}
// Unknown keys are rejected. Errors throw input_error naming the offending
// JSON path (or the byte offset for syntax errors).
lts_model model_from_json( std::string_view text );
lts_model load_model( const std::string& path );

// Keys in the same layout; states keep their declared order, relations and
// valuation are sorted by name, pairs by (src, dst) index.
std::string model_to_json( const lts_model& m, int indent = 2 );

// Graphviz description: one node per state labelled with its true
// propositions, one edge per transition labelled with its action.
std::string model_to_dot( const lts_model& m, std::string_view graph_name = "lts" );

} // namespace khsat
