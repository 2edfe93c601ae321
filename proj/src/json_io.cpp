#include "evograph/json_io.hpp"

namespace evograph {

json to_json(const Checkpoint& cp) {
    json parents = json::array();
    for (const auto& p : cp.parents)
        parents.push_back(p.str());
    json j{
        {"id", cp.id.str()},
        {"kind", to_string(cp.kind)},
        {"parents", parents},
        {"snapshot", cp.snapshot.str()},
        {"chat", cp.chat.str()},
        {"title", cp.title},
        {"description", cp.description},
        {"created_at", format_timestamp(cp.created_at)},
    };
    if (cp.applied)
        j["applied"] = {{"message_id", cp.applied->message.str()}, {"block_id", cp.applied->block}};
    return j;
}

Checkpoint checkpoint_from_json(const json& j) {
    Checkpoint cp;
    cp.id = CheckpointId{j.at("id").get<std::string>()};
    cp.kind = parse_checkpoint_kind(j.at("kind").get<std::string>());
    for (const auto& p : j.at("parents"))
        cp.parents.emplace_back(p.get<std::string>());
    cp.snapshot = SnapshotId{j.at("snapshot").get<std::string>()};
    cp.chat = ChatId{j.at("chat").get<std::string>()};
    cp.title = j.at("title").get<std::string>();
    cp.description = j.at("description").get<std::string>();
    cp.created_at = parse_timestamp(j.at("created_at").get<std::string>());
    if (auto it = j.find("applied"); it != j.end())
        cp.applied = AppliedBlock{MessageId{it->at("message_id").get<std::string>()},
                                  it->at("block_id").get<std::string>()};
    return cp;
}

json to_json(const ChatMessage& m) {
    json blocks = json::array();
    for (const auto& b : m.code_blocks)
        blocks.push_back({{"block_id", b.block_id},
                          {"language", b.language},
                          {"target_path", b.target_path},
                          {"body", b.body}});
    return {
        {"id", m.id.str()},
        {"role", to_string(m.role)},
        {"text", m.text},
        {"code_blocks", blocks},
        {"created_at", format_timestamp(m.created_at)},
    };
}

ChatMessage message_from_json(const json& j) {
    ChatMessage m;
    m.id = MessageId{j.at("id").get<std::string>()};
    m.role = parse_role(j.at("role").get<std::string>());
    m.text = j.at("text").get<std::string>();
    for (const auto& b : j.at("code_blocks"))
        m.code_blocks.push_back({b.at("block_id").get<std::string>(), b.at("language").get<std::string>(),
                                 b.at("target_path").get<std::string>(), b.at("body").get<std::string>()});
    m.created_at = parse_timestamp(j.at("created_at").get<std::string>());
    return m;
}

json to_json(const ChatSession& s) {
    json messages = json::array();
    for (const auto& m : s.messages)
        messages.push_back(to_json(m));
    return {{"messages", messages}};
}

ChatSession session_from_json(const ChatId& id, const json& j) {
    ChatSession s{id, {}};
    for (const auto& m : j.at("messages"))
        s.messages.push_back(message_from_json(m));
    return s;
}

json graph_to_json(const DevGraph& graph) {
    json nodes = json::array();
    json edges = json::array();
    for (const auto& id : graph.topological_order()) {
        const auto& cp = graph.at(id);
        auto node = to_json(cp);
        node["color"] = color_token(cp.kind);
        node["active"] = id == graph.active();
        nodes.push_back(std::move(node));
        for (const auto& p : cp.parents)
            edges.push_back({{"from", p.str()}, {"to", id.str()}});
    }
    return {{"active", graph.active().str()}, {"origin", graph.origin().str()}, {"nodes", nodes}, {"edges", edges}};
}

json to_json(const WorkspaceDiff& diff) {
    json files = json::array();
    for (const auto& f : diff.files) {
        json entry{{"kind", to_string(f.kind)}, {"path", f.path}};
        if (f.kind == FileChangeKind::Added)
            entry["lines"] = f.lines;
        if (f.kind == FileChangeKind::Modified) {
            json hunks = json::array();
            for (const auto& h : f.hunks)
                hunks.push_back({{"old_start", h.old_start},
                                 {"old_len", h.old_len},
                                 {"new_start", h.new_start},
                                 {"new_len", h.new_len},
                                 {"removed", h.removed},
                                 {"added", h.added},
                                 {"removed_missing_eol", h.removed_missing_eol},
                                 {"added_missing_eol", h.added_missing_eol}});
            entry["hunks"] = hunks;
        }
        files.push_back(std::move(entry));
    }
    return {{"files", files}};
}

json to_json(const ProvenanceMap& pmap) {
    json files = json::object();
    for (const auto& [path, spans] : pmap.files) {
        json list = json::array();
        for (const auto& s : spans)
            list.push_back({{"path", s.path},
                            {"line_start", s.line_start},
                            {"line_end", s.line_end},
                            {"responsible", s.responsible.str()},
                            {"author", to_string(s.author)},
                            {"color", color_token(s.author)}});
        files[path] = std::move(list);
    }
    return {{"computed_against", pmap.computed_against.str()},
            {"active", pmap.active.str()},
            {"files", files},
            {"line_counts", pmap.line_counts}};
}

json to_json(const ProvenanceSummary& summary) {
    auto counts = [](const LineCounts& c) {
        return json{{"ai_lines", c.ai_lines}, {"human_lines", c.human_lines}, {"unchanged_lines", c.unchanged_lines}};
    };
    json files = json::object();
    for (const auto& [path, c] : summary.files)
        files[path] = counts(c);
    return {{"files", files}, {"total", counts(summary.total)}};
}

} // namespace evograph
