#pragma once

#include "evograph/core.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace evograph {

enum class CheckpointKind { Origin, ManualChange, AiPrompt, AiCodeApplied, Merge };

std::string_view to_string(CheckpointKind kind);
CheckpointKind parse_checkpoint_kind(std::string_view text);

// Client legend: "origin", "prompt", "ai-code", "manual" (manual and merge share).
std::string_view color_token(CheckpointKind kind);

// The code block an AiCodeApplied checkpoint applied.
struct AppliedBlock {
    MessageId message;
    std::string block;

    friend bool operator==(const AppliedBlock&, const AppliedBlock&) = default;
};

struct Checkpoint {
    CheckpointId id;
    CheckpointKind kind = CheckpointKind::ManualChange;
    // Merge: [primary = formerly active, secondary = merged in].
    std::vector<CheckpointId> parents;
    SnapshotId snapshot;
    ChatId chat;
    std::string title;
    std::string description;
    Timestamp created_at{};
    std::optional<AppliedBlock> applied;

    const CheckpointId* primary_parent() const { return parents.empty() ? nullptr : &parents.front(); }

    friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct GraphDelta {
    CheckpointId removed;
    std::vector<CheckpointId> reattached;
    CheckpointId new_parent;
    bool active_moved = false;
};

inline constexpr std::size_t kMaxTitleChars = 60;

// Truncates to at most kMaxTitleChars bytes on a UTF-8 boundary, ending in "...".
std::string clamp_title(std::string_view title);

// Rooted DAG of checkpoints with exactly one Origin and one active node.
class DevGraph {
public:
    DevGraph() = default;

    static DevGraph with_origin(Checkpoint origin);
    // Rebuilds a graph from stored parts and validates it.
    static DevGraph from_parts(std::map<CheckpointId, Checkpoint> checkpoints, CheckpointId active);

    bool empty() const noexcept { return nodes_.empty(); }
    std::size_t size() const noexcept { return nodes_.size(); }
    const CheckpointId& active() const noexcept { return active_; }
    const CheckpointId& origin() const noexcept { return origin_; }
    const std::map<CheckpointId, Checkpoint>& checkpoints() const noexcept { return nodes_; }

    bool contains(const CheckpointId& id) const { return nodes_.contains(id); }
    const Checkpoint* find(const CheckpointId& id) const;
    const Checkpoint& at(const CheckpointId& id) const;
    const Checkpoint& active_checkpoint() const { return at(active_); }

    // Appends a non-Origin node; it becomes active. Parents must exist.
    const Checkpoint& add(Checkpoint cp);
    void set_active(const CheckpointId& id);

    // Removes a non-Origin node. Children re-point the slot that referenced it
    // to its primary parent; an active node hands over to that parent.
    GraphDelta remove(const CheckpointId& id);

    const Checkpoint& edit_metadata(const CheckpointId& id, const std::optional<std::string>& title,
                                    const std::optional<std::string>& description);

    std::vector<CheckpointId> children(const CheckpointId& id) const;
    // Includes id itself.
    std::set<CheckpointId> ancestors(const CheckpointId& id) const;
    // Maximal common ancestor; ties by latest created_at, then greatest id.
    CheckpointId lowest_common_ancestor(const CheckpointId& a, const CheckpointId& b) const;
    // Parents before children; ties by (created_at, id).
    std::vector<CheckpointId> topological_order() const;

    // Throws Integrity on a broken invariant.
    void validate() const;

    friend bool operator==(const DevGraph&, const DevGraph&) = default;

private:
    std::map<CheckpointId, Checkpoint> nodes_;
    CheckpointId active_;
    CheckpointId origin_;
};

} // namespace evograph
