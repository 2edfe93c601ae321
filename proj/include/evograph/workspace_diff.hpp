#pragma once

#include "evograph/line_diff.hpp"
#include "evograph/snapshot_store.hpp"

#include <string>
#include <vector>

namespace evograph {

enum class FileChangeKind { Added, Deleted, Modified, OpaqueBinaryChanged };

std::string_view to_string(FileChangeKind kind);

struct FileChange {
    FileChangeKind kind = FileChangeKind::Modified;
    std::string path;
    // Added: every line of the new file.
    std::vector<std::string> lines;
    // Modified: hunks against the old file.
    std::vector<DiffHunk> hunks;

    friend bool operator==(const FileChange&, const FileChange&) = default;
};

// Per-path changes, sorted by path.
struct WorkspaceDiff {
    std::vector<FileChange> files;

    bool empty() const noexcept { return files.empty(); }
    std::vector<std::string> paths() const;
};

// Only paths whose blobs differ are listed. Binary content on either side is
// reported as OpaqueBinaryChanged (binary deletions stay Deleted).
WorkspaceDiff workspace_diff(const SnapshotStore& store, const Snapshot& from, const Snapshot& to);

} // namespace evograph
