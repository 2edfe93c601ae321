#pragma once

#include "evograph/gateway.hpp"
#include "evograph/persistence.hpp"
#include "evograph/snapshot_store.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evograph {

enum class EventKind { GraphChanged, ActiveChanged, ChatAppended, ReviewModeToggled };

std::string_view to_string(EventKind kind);

struct EngineEvent {
    EventKind kind = EventKind::GraphChanged;
    std::vector<std::string> ids;
};

struct EngineOptions {
    Clock clock = system_clock();
    // Zero picks a random seed.
    std::uint64_t id_seed = 0;
    // Only used by init; open reads the rules from the session file.
    std::optional<IgnoreRules> rules;
};

struct PromptResult {
    CheckpointId checkpoint;
    MessageId user_message;
    MessageId assistant_message;
};

struct MergeResult {
    CheckpointId checkpoint;
    CheckpointId lca;
    // Paths whose edits overlapped; resolved by the assistant unless it failed.
    std::vector<std::string> conflicted_paths;
    std::vector<std::string> warnings;
    bool gateway_failed = false;
};

// Full id, a unique prefix of one, or the names "origin" and "active".
CheckpointId resolve_checkpoint(const DevGraph& graph, std::string_view id_or_prefix);

// System notice appended to the active conversation on merge.
std::string merge_notice(std::string_view other_title, std::string_view summary);

// One workspace directory and its `.evograph/` session. Every mutation is
// saved before it returns; a failed operation leaves graph and chats as they
// were.
class Workspace {
public:
    static Workspace init(const fs::path& root, AssistantGateway& gateway, EngineOptions options = {});
    static Workspace open(const fs::path& root, AssistantGateway& gateway, EngineOptions options = {});

    Workspace(Workspace&&) noexcept = default;
    Workspace& operator=(Workspace&&) noexcept = default;

    const fs::path& root() const noexcept { return root_; }
    fs::path session_dir() const { return root_ / kSessionDirName; }
    const SessionState& state() const noexcept { return state_; }
    const DevGraph& graph() const noexcept { return state_.graph; }
    const SnapshotStore& store() const noexcept { return store_; }
    AssistantGateway& gateway() noexcept { return *gateway_; }

    void set_listener(std::function<void(const EngineEvent&)> listener) { listener_ = std::move(listener); }

    CheckpointId resolve(std::string_view id_or_prefix) const { return resolve_checkpoint(graph(), id_or_prefix); }

    const Checkpoint& checkpoint_manual(const std::optional<std::string>& title = std::nullopt,
                                        const std::optional<std::string>& description = std::nullopt);
    RestoreReport switch_to(const CheckpointId& id);
    GraphDelta delete_checkpoint(const CheckpointId& id);
    const Checkpoint& edit_metadata(const CheckpointId& id, const std::optional<std::string>& title,
                                    const std::optional<std::string>& description);

    PromptResult send_prompt(std::string_view text, bool include_graph);
    PromptResult edit_prompt(const CheckpointId& source, const MessageId& message, std::string_view new_text,
                             bool include_graph);
    const Checkpoint& apply_code_block(const MessageId& message, std::string_view block_id);
    MergeResult merge_with(const CheckpointId& other);

    // Drops snapshots no checkpoint references. Returns reclaimed blob count.
    std::size_t collect_garbage();

private:
    Workspace(fs::path root, AssistantGateway& gateway, SessionState state, EngineOptions options);

    std::string next_id();
    Timestamp now() const { return clock_(); }
    Snapshot capture();
    const Snapshot& remember(const Snapshot& snap);
    TitleDescription describe(const WorkspaceDiff& diff, CheckpointKind kind, const PromptExchange* exchange = nullptr);
    PromptResult prompt_from(const CheckpointId& parent, std::vector<ChatMessage> prefix, std::string_view text,
                             bool include_graph);
    void commit(std::vector<EngineEvent> events);

    fs::path root_;
    AssistantGateway* gateway_;
    SnapshotStore store_;
    SessionState state_;
    Clock clock_;
    IdGenerator ids_;
    std::function<void(const EngineEvent&)> listener_;
};

} // namespace evograph
