#pragma once

#include "evograph/chat.hpp"
#include "evograph/history_graph.hpp"
#include "evograph/provenance.hpp"
#include "evograph/workspace_diff.hpp"

#include <nlohmann/json.hpp>

namespace evograph {

using json = nlohmann::json;

json to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const json& j);

json to_json(const ChatMessage& m);
ChatMessage message_from_json(const json& j);
json to_json(const ChatSession& s);
ChatSession session_from_json(const ChatId& id, const json& j);

// {active, origin, nodes: [...topological...], edges: [{from, to}]}
json graph_to_json(const DevGraph& graph);

json to_json(const WorkspaceDiff& diff);
json to_json(const ProvenanceMap& pmap);
json to_json(const ProvenanceSummary& summary);

} // namespace evograph
