#pragma once

#include "evograph/chat.hpp"
#include "evograph/context_serializer.hpp"
#include "evograph/history_graph.hpp"
#include "evograph/ignore_rules.hpp"
#include "evograph/snapshot_store.hpp"

#include <filesystem>
#include <map>

namespace evograph {

inline constexpr int kSessionFormatVersion = 1;
inline constexpr std::string_view kSessionFileName = "session.json";

struct Settings {
    IgnoreRules ignore = IgnoreRules::defaults();
    std::size_t context_budget = kDefaultContextBudget;
    // Whether an assistant merge proposal may contain lines found in none of
    // base, active or other.
    bool accept_novel_merge_lines = true;

    friend bool operator==(const Settings&, const Settings&) = default;
};

struct SessionState {
    DevGraph graph;
    ChatStore chats;
    Settings settings;
    // Snapshot id -> first capture time.
    std::map<SnapshotId, Timestamp> snapshots;

    friend bool operator==(const SessionState&, const SessionState&) = default;
};

// Sorted-key UTF-8 JSON text of the session file.
std::string session_to_text(const SessionState& state);
// Throws Parse on malformed JSON, UnsupportedVersion on a format mismatch and
// Corruption on a dangling reference.
SessionState session_from_text(std::string_view text);

// Every parent, snapshot, chat and active id resolves. When a store is given,
// snapshot manifests must also exist there.
void validate_session(const SessionState& state, const SnapshotStore* store = nullptr);

// Writes <dir>/session.json via a temporary file and rename.
void save_session(const SessionState& state, const std::filesystem::path& session_dir);
SessionState load_session(const std::filesystem::path& session_dir, const SnapshotStore* store = nullptr);

} // namespace evograph
