#pragma once

#include "evograph/persistence.hpp"
#include "evograph/workspace_diff.hpp"

#include <string>
#include <vector>

namespace evograph {

struct CompareReport {
    CheckpointId active;
    CheckpointId other;
    WorkspaceDiff diff;
    // Messages present in only one of the two chats.
    std::vector<ChatMessage> only_active;
    std::vector<ChatMessage> only_other;
    // Unified diff (a = active, b = other) followed by a `--- chat ---` section.
    std::string rendered;
};

CompareReport compare_checkpoints(const SessionState& state, const SnapshotStore& store, const CheckpointId& active,
                                  const CheckpointId& other);

// Unified diff of two snapshots with `--- a/<path>` / `+++ b/<path>` headers.
std::string render_workspace_diff(const SnapshotStore& store, const Snapshot& a, const Snapshot& b);

} // namespace evograph
