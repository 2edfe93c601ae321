#pragma once

#include "evograph/history_graph.hpp"

#include <string>
#include <vector>

namespace evograph {

inline constexpr std::size_t kDefaultContextBudget = 8000;
inline constexpr std::size_t kMinContextBudget = 500;
inline constexpr std::string_view kContextHeader = "EVOGRAPH-CONTEXT v1";

struct ContextDocument {
    std::string text;
    std::vector<CheckpointId> included_nodes;
    bool truncated = false;
};

// Outline of the graph for the assistant. Grammar (one element per line):
//
//   EVOGRAPH-CONTEXT v1
//   active: <id>
//   truncated: yes|no
//   omitted: <n> checkpoint(s)                  (only when nodes were dropped)
//   nodes:
//     NODE <id> [<Kind>] [(active) ]<title>
//       <one-line description>                  (unless elided)
//   edges:
//     EDGE <parent id> -> <child id>
//
// Nodes come in topological order, edges in child order. Over budget,
// descriptions go first, then whole nodes, farthest from the active node
// first; the active node and all its ancestors always stay.
ContextDocument serialize_graph(const DevGraph& graph, std::size_t budget_chars = kDefaultContextBudget);

} // namespace evograph
