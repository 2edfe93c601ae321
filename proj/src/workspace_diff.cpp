#include "evograph/workspace_diff.hpp"

#include <set>

namespace evograph {

std::string_view to_string(FileChangeKind kind) {
    switch (kind) {
    case FileChangeKind::Added: return "added";
    case FileChangeKind::Deleted: return "deleted";
    case FileChangeKind::Modified: return "modified";
    case FileChangeKind::OpaqueBinaryChanged: return "binary";
    }
    return "?";
}

std::vector<std::string> WorkspaceDiff::paths() const {
    std::vector<std::string> out;
    for (const auto& f : files)
        out.push_back(f.path);
    return out;
}

WorkspaceDiff workspace_diff(const SnapshotStore& store, const Snapshot& from, const Snapshot& to) {
    std::set<std::string> paths;
    for (const auto& [p, b] : from.entries)
        paths.insert(p);
    for (const auto& [p, b] : to.entries)
        paths.insert(p);

    WorkspaceDiff diff;
    for (const auto& path : paths) {
        auto a = from.entries.find(path);
        auto b = to.entries.find(path);
        bool in_a = a != from.entries.end();
        bool in_b = b != to.entries.end();
        if (in_a && in_b && a->second == b->second)
            continue;
        FileChange change;
        change.path = path;
        if (!in_b) {
            change.kind = FileChangeKind::Deleted;
        } else {
            auto new_bytes = store.read_blob(b->second);
            auto old_bytes = in_a ? store.read_blob(a->second) : std::string{};
            if (is_binary(new_bytes) || (in_a && is_binary(old_bytes))) {
                change.kind = FileChangeKind::OpaqueBinaryChanged;
            } else if (!in_a) {
                change.kind = FileChangeKind::Added;
                for (const auto& l : split_lines(new_bytes))
                    change.lines.emplace_back(l.text);
            } else {
                change.kind = FileChangeKind::Modified;
                change.hunks = line_diff(old_bytes, new_bytes);
            }
        }
        diff.files.push_back(std::move(change));
    }
    return diff;
}

} // namespace evograph
