#include "evograph/merge.hpp"
#include "evograph/line_diff.hpp"

#include <algorithm>

namespace evograph {

namespace {

enum class Side { Ours, Theirs };

// Change against base, 0-based half-open ranges.
struct Change {
    Side side;
    std::size_t base_begin, base_end;
    std::size_t side_begin, side_end;
};

std::vector<Change> changes(Side side, std::span<const Line> base, std::span<const Line> other) {
    std::vector<Change> out;
    std::size_t pi = 0, pj = 0;
    auto flush = [&](std::size_t i, std::size_t j) {
        if (i > pi || j > pj)
            out.push_back({side, pi, i, pj, j});
        pi = i + 1;
        pj = j + 1;
    };
    for (auto [i, j] : match_lines(base, other))
        flush(i, j);
    flush(base.size(), other.size());
    return out;
}

bool touches(std::size_t b0, std::size_t e0, std::size_t b1, std::size_t e1) {
    return b0 <= e1 && b1 <= e0;
}

std::vector<std::string> texts(std::span<const Line> lines) {
    std::vector<std::string> out;
    for (const auto& l : lines)
        out.emplace_back(l.text);
    return out;
}

} // namespace

FileMergeOutcome three_way_merge(std::string_view base_text, std::string_view ours_text,
                                 std::string_view theirs_text, ConflictStyle style) {
    auto base = split_lines(base_text);
    auto ours = split_lines(ours_text);
    auto theirs = split_lines(theirs_text);

    auto all = changes(Side::Ours, base, ours);
    auto theirs_changes = changes(Side::Theirs, base, theirs);
    all.insert(all.end(), theirs_changes.begin(), theirs_changes.end());
    std::stable_sort(all.begin(), all.end(), [](const Change& l, const Change& r) {
        return std::tie(l.base_begin, l.base_end) < std::tie(r.base_begin, r.base_end);
    });

    FileMergeOutcome result;
    std::vector<Line> out;
    std::size_t pos = 0;
    // Offset of side coordinates against base before the current group.
    std::ptrdiff_t ours_shift = 0, theirs_shift = 0;

    auto side_region = [&](Side side, std::span<const Change> group, std::size_t begin, std::size_t end) {
        const auto& lines = side == Side::Ours ? ours : theirs;
        std::vector<Line> region;
        auto p = begin;
        for (const auto& c : group) {
            if (c.side != side)
                continue;
            region.insert(region.end(), base.begin() + static_cast<std::ptrdiff_t>(p),
                          base.begin() + static_cast<std::ptrdiff_t>(c.base_begin));
            region.insert(region.end(), lines.begin() + static_cast<std::ptrdiff_t>(c.side_begin),
                          lines.begin() + static_cast<std::ptrdiff_t>(c.side_end));
            p = c.base_end;
        }
        region.insert(region.end(), base.begin() + static_cast<std::ptrdiff_t>(p),
                      base.begin() + static_cast<std::ptrdiff_t>(end));
        return region;
    };
    auto emit_terminated = [&out](std::span<const Line> lines) {
        for (auto l : lines) {
            l.terminated = true;
            out.push_back(l);
        }
    };
    auto emit_marker = [&out](std::string_view marker) { out.push_back({marker, true}); };

    std::size_t g = 0;
    while (g < all.size()) {
        auto begin = all[g].base_begin;
        auto end = all[g].base_end;
        auto last = g + 1;
        while (last < all.size() && touches(begin, end, all[last].base_begin, all[last].base_end)) {
            end = std::max(end, all[last].base_end);
            ++last;
        }
        std::span<const Change> group(all.data() + g, last - g);
        bool has_ours = std::any_of(group.begin(), group.end(), [](auto& c) { return c.side == Side::Ours; });
        bool has_theirs = std::any_of(group.begin(), group.end(), [](auto& c) { return c.side == Side::Theirs; });

        out.insert(out.end(), base.begin() + static_cast<std::ptrdiff_t>(pos),
                   base.begin() + static_cast<std::ptrdiff_t>(begin));
        auto ours_region = side_region(Side::Ours, group, begin, end);
        auto theirs_region = side_region(Side::Theirs, group, begin, end);
        auto ours_start = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(begin) + ours_shift);
        auto theirs_start = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(begin) + theirs_shift);

        if (!has_theirs || (has_ours && ours_region == theirs_region)) {
            out.insert(out.end(), ours_region.begin(), ours_region.end());
        } else if (!has_ours) {
            out.insert(out.end(), theirs_region.begin(), theirs_region.end());
        } else {
            std::span<const Line> base_region(base.data() + begin, end - begin);
            result.conflicts.push_back(ConflictRegion{
                {begin + 1, end - begin},
                {ours_start + 1, ours_region.size()},
                {theirs_start + 1, theirs_region.size()},
                texts(base_region),
                texts(ours_region),
                texts(theirs_region),
            });
            if (style == ConflictStyle::Diff3Markers) {
                emit_marker(kMarkerOurs);
                emit_terminated(ours_region);
                emit_marker(kMarkerBase);
                emit_terminated(base_region);
                emit_marker(kMarkerSplit);
                emit_terminated(theirs_region);
                emit_marker(kMarkerTheirs);
            } else {
                if (theirs_region.empty())
                    out.insert(out.end(), ours_region.begin(), ours_region.end());
                else
                    emit_terminated(ours_region);
                out.insert(out.end(), theirs_region.begin(), theirs_region.end());
            }
        }
        ours_shift += static_cast<std::ptrdiff_t>(ours_region.size()) - static_cast<std::ptrdiff_t>(end - begin);
        theirs_shift += static_cast<std::ptrdiff_t>(theirs_region.size()) - static_cast<std::ptrdiff_t>(end - begin);
        pos = end;
        g = last;
    }
    out.insert(out.end(), base.begin() + static_cast<std::ptrdiff_t>(pos), base.end());
    result.merged = join_lines(out);
    return result;
}

} // namespace evograph
