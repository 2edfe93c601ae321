#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace evograph {

// 1-based start, length in lines.
struct LineRange {
    std::size_t start = 1;
    std::size_t len = 0;

    friend bool operator==(const LineRange&, const LineRange&) = default;
};

struct ConflictRegion {
    LineRange base;
    LineRange ours;
    LineRange theirs;
    std::vector<std::string> base_lines;
    std::vector<std::string> ours_lines;
    std::vector<std::string> theirs_lines;

    friend bool operator==(const ConflictRegion&, const ConflictRegion&) = default;
};

enum class ConflictStyle {
    // diff3 markers: <<<<<<< active / ||||||| base / ======= / >>>>>>> other
    Diff3Markers,
    // ours region followed by theirs region, no markers
    Union,
};

struct FileMergeOutcome {
    std::string merged;
    std::vector<ConflictRegion> conflicts;

    bool clean() const noexcept { return conflicts.empty(); }
};

// Changes that overlap or touch in base coordinates are grouped; a group
// changed on one side takes that side, a group changed identically on both
// sides is applied once, anything else is a conflict.
FileMergeOutcome three_way_merge(std::string_view base, std::string_view ours, std::string_view theirs,
                                 ConflictStyle style = ConflictStyle::Diff3Markers);

inline constexpr std::string_view kMarkerOurs = "<<<<<<< active";
inline constexpr std::string_view kMarkerBase = "||||||| base";
inline constexpr std::string_view kMarkerSplit = "=======";
inline constexpr std::string_view kMarkerTheirs = ">>>>>>> other";

} // namespace evograph
