#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace evograph {

// One line of a text: its bytes without the '\n', and whether a '\n' followed.
// A "\r\n" file keeps the '\r' in text, so reassembly is byte exact.
struct Line {
    std::string_view text;
    bool terminated = true;

    friend bool operator==(const Line&, const Line&) = default;
};

std::vector<Line> split_lines(std::string_view text);
std::string join_lines(std::span<const Line> lines);

// Line numbers are 1-based. For a pure insertion (old_len == 0) old_start is
// the old line the insertion precedes (old line count + 1 at end of file);
// likewise new_start for a pure deletion.
struct DiffHunk {
    std::size_t old_start = 1;
    std::size_t old_len = 0;
    std::size_t new_start = 1;
    std::size_t new_len = 0;
    std::vector<std::string> removed;
    std::vector<std::string> added;
    // Set when the last removed/added line is the final line and lacks '\n'.
    bool removed_missing_eol = false;
    bool added_missing_eol = false;

    friend bool operator==(const DiffHunk&, const DiffHunk&) = default;
};

// Matched (old index, new index) pairs, 0-based and strictly increasing in
// both coordinates, forming a longest common subsequence of the line lists.
std::vector<std::pair<std::size_t, std::size_t>> match_lines(std::span<const Line> old_lines,
                                                             std::span<const Line> new_lines);

// Shortest edit script between the two texts as maximal runs of changes.
std::vector<DiffHunk> line_diff(std::string_view old_text, std::string_view new_text);

// Applies hunks produced against old_text. Throws Validation when a hunk's
// removed lines do not match.
std::string apply_hunks(std::string_view old_text, std::span<const DiffHunk> hunks);

// Unified diff body (hunk headers and lines) with `context` lines around each
// change; "\ No newline at end of file" marks unterminated final lines.
std::string unified_hunks(std::string_view old_text, std::string_view new_text, std::size_t context = 3);

} // namespace evograph
