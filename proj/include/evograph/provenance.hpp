#pragma once

#include "evograph/history_graph.hpp"
#include "evograph/snapshot_store.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace evograph {

enum class AuthorClass { AI, Human };

std::string_view to_string(AuthorClass author);
AuthorClass parse_author_class(std::string_view text);
// Review highlighting: AI "blue", Human "green".
std::string_view color_token(AuthorClass author);
// Origin has no author.
std::optional<AuthorClass> author_class(CheckpointKind kind);

struct ProvenanceSpan {
    std::string path;
    // 1-based, inclusive, in the active content.
    std::size_t line_start = 0;
    std::size_t line_end = 0;
    CheckpointId responsible;
    AuthorClass author = AuthorClass::AI;

    friend bool operator==(const ProvenanceSpan&, const ProvenanceSpan&) = default;
};

struct ProvenanceMap {
    CheckpointId computed_against;
    CheckpointId active;
    // Only files with changed lines have an entry.
    std::map<std::string, std::vector<ProvenanceSpan>> files;
    // Line count of every text file in the active snapshot.
    std::map<std::string, std::size_t> line_counts;

    friend bool operator==(const ProvenanceMap&, const ProvenanceMap&) = default;
};

// Replays the active checkpoint's ancestry from Origin, carrying each line's
// responsible checkpoint through successive line diffs (merges consult the
// primary parent first, then the secondary). Lines equal to Origin per the
// Origin-vs-active diff carry no span; binary files are skipped.
ProvenanceMap compute_provenance(const DevGraph& graph, const SnapshotStore& store);

struct LineInfo {
    bool unchanged = true;
    CheckpointId checkpoint;
    std::string title;
    std::string description;
    CheckpointKind kind = CheckpointKind::Origin;
    Timestamp created_at{};
    std::optional<AuthorClass> author;
};

// Throws NotFound for an unknown path and Range for a line outside the file.
LineInfo line_info(const DevGraph& graph, const ProvenanceMap& pmap, std::string_view path, std::size_t line);

struct LineCounts {
    std::size_t ai_lines = 0;
    std::size_t human_lines = 0;
    std::size_t unchanged_lines = 0;

    std::size_t total() const noexcept { return ai_lines + human_lines + unchanged_lines; }
    friend bool operator==(const LineCounts&, const LineCounts&) = default;
};

struct ProvenanceSummary {
    std::map<std::string, LineCounts> files;
    LineCounts total;
};

ProvenanceSummary provenance_summary(const ProvenanceMap& pmap);

// Per-file span table: path, range, author, responsible title, timestamp.
std::string render_review(const DevGraph& graph, const ProvenanceMap& pmap);

} // namespace evograph
