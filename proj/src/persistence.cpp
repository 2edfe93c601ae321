#include "evograph/persistence.hpp"
#include "evograph/error.hpp"
#include "evograph/json_io.hpp"

#include <fstream>

namespace evograph {

std::string session_to_text(const SessionState& state) {
    json checkpoints = json::object();
    for (const auto& [id, cp] : state.graph.checkpoints())
        checkpoints[id.str()] = to_json(cp);
    json chats = json::object();
    for (const auto& [id, s] : state.chats.sessions())
        chats[id.str()] = to_json(s);
    json snapshots = json::object();
    for (const auto& [id, t] : state.snapshots)
        snapshots[id.str()] = {{"created_at", format_timestamp(t)}};
    json doc{
        {"format_version", kSessionFormatVersion},
        {"graph",
         {{"active", state.graph.active().str()},
          {"origin", state.graph.origin().str()},
          {"checkpoints", checkpoints}}},
        {"chats", chats},
        {"settings",
         {{"ignore", state.settings.ignore.patterns},
          {"max_file_bytes", state.settings.ignore.max_file_bytes},
          {"context_budget", state.settings.context_budget},
          {"accept_novel_merge_lines", state.settings.accept_novel_merge_lines}}},
        {"snapshots", snapshots},
    };
    return doc.dump(2) + "\n";
}

SessionState session_from_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, "session file is not valid JSON", e.what());
    }
    auto version = doc.is_object() ? doc.find("format_version") : doc.end();
    if (!doc.is_object() || version == doc.end() || !version->is_number_integer())
        throw Error(ErrorCode::Parse, "session file has no format_version");
    if (version->get<int>() != kSessionFormatVersion)
        throw Error(ErrorCode::UnsupportedVersion, "unsupported session format version",
                    std::to_string(version->get<int>()) + " (supported: " + std::to_string(kSessionFormatVersion) + ")");

    SessionState state;
    try {
        const auto& g = doc.at("graph");
        std::map<CheckpointId, Checkpoint> nodes;
        for (const auto& [key, value] : g.at("checkpoints").items()) {
            auto cp = checkpoint_from_json(value);
            if (cp.id.str() != key)
                throw Error(ErrorCode::Corruption, "checkpoint key does not match its id", key);
            nodes.emplace(cp.id, std::move(cp));
        }
        for (const auto& [key, value] : doc.at("chats").items())
            state.chats.insert(session_from_json(ChatId{key}, value));
        const auto& s = doc.at("settings");
        state.settings.ignore.patterns = s.at("ignore").get<std::vector<std::string>>();
        state.settings.ignore.max_file_bytes = s.at("max_file_bytes").get<std::uint64_t>();
        state.settings.context_budget = s.at("context_budget").get<std::size_t>();
        state.settings.accept_novel_merge_lines = s.at("accept_novel_merge_lines").get<bool>();
        for (const auto& [key, value] : doc.at("snapshots").items())
            state.snapshots.emplace(SnapshotId{key}, parse_timestamp(value.at("created_at").get<std::string>()));

        CheckpointId active{g.at("active").get<std::string>()};
        for (const auto& [id, cp] : nodes)
            for (const auto& p : cp.parents)
                if (!nodes.contains(p))
                    throw Error(ErrorCode::Corruption, "dangling parent reference", p.str());
        if (!nodes.contains(active))
            throw Error(ErrorCode::Corruption, "dangling active checkpoint", active.str());
        try {
            state.graph = DevGraph::from_parts(std::move(nodes), active);
        } catch (const Error& e) {
            throw Error(ErrorCode::Corruption, e.what(), e.detail());
        }
        if (state.graph.origin().str() != g.at("origin").get<std::string>())
            throw Error(ErrorCode::Corruption, "origin id does not match the Origin checkpoint",
                        g.at("origin").get<std::string>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, "session file is missing fields", e.what());
    }
    validate_session(state);
    return state;
}

void validate_session(const SessionState& state, const SnapshotStore* store) {
    try {
        state.graph.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::Corruption, e.what(), e.detail());
    }
    for (const auto& [id, cp] : state.graph.checkpoints()) {
        if (!state.chats.contains(cp.chat))
            throw Error(ErrorCode::Corruption, "dangling chat reference", cp.chat.str());
        if (!state.snapshots.contains(cp.snapshot))
            throw Error(ErrorCode::Corruption, "dangling snapshot reference", cp.snapshot.str());
        if (store && !store->contains(cp.snapshot))
            throw Error(ErrorCode::Corruption, "snapshot manifest missing from the store", cp.snapshot.str());
    }
}

void save_session(const SessionState& state, const std::filesystem::path& session_dir) {
    namespace fs = std::filesystem;
    auto text = session_to_text(state);
    auto target = session_dir / kSessionFileName;
    auto tmp = session_dir / (std::string(kSessionFileName) + ".tmp");
    std::error_code ec;
    try {
        write_file_bytes(tmp, text);
    } catch (const Error&) {
        fs::remove(tmp, ec);
        throw;
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw Error(ErrorCode::Io, "cannot replace session file", target.string() + ": " + ec.message());
    }
}

SessionState load_session(const std::filesystem::path& session_dir, const SnapshotStore* store) {
    auto path = session_dir / kSessionFileName;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
        throw Error(ErrorCode::NotFound, "no session here; run `evograph init` first", path.string());
    auto state = session_from_text(read_file_bytes(path));
    if (store)
        validate_session(state, store);
    return state;
}

} // namespace evograph
