#include "evograph/line_diff.hpp"
#include "evograph/error.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace evograph {

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back({text.substr(start), false});
            break;
        }
        lines.push_back({text.substr(start, nl - start), true});
        start = nl + 1;
    }
    return lines;
}

std::string join_lines(std::span<const Line> lines) {
    std::string out;
    for (const auto& l : lines) {
        out.append(l.text);
        if (l.terminated)
            out.push_back('\n');
    }
    return out;
}

namespace {

struct Snake {
    std::size_t x0, y0, x1, y1;
};

// Linear-space O(ND) matcher over interned line ids.
class Matcher {
public:
    Matcher(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) : a_(a), b_(b) {}

    std::vector<std::pair<std::size_t, std::size_t>> run() {
        compare(0, a_.size(), 0, b_.size());
        return std::move(out_);
    }

private:
    void compare(std::size_t lo_a, std::size_t hi_a, std::size_t lo_b, std::size_t hi_b) {
        while (lo_a < hi_a && lo_b < hi_b && a_[lo_a] == b_[lo_b])
            out_.emplace_back(lo_a++, lo_b++);
        auto end_a = hi_a;
        while (lo_a < hi_a && lo_b < hi_b && a_[hi_a - 1] == b_[hi_b - 1]) {
            --hi_a;
            --hi_b;
        }
        if (lo_a < hi_a && lo_b < hi_b) {
            auto s = middle_snake(lo_a, hi_a, lo_b, hi_b);
            compare(lo_a, s.x0, lo_b, s.y0);
            for (auto x = s.x0, y = s.y0; x < s.x1; ++x, ++y)
                out_.emplace_back(x, y);
            compare(s.x1, hi_a, s.y1, hi_b);
        }
        for (std::size_t i = 0; hi_a + i < end_a; ++i)
            out_.emplace_back(hi_a + i, hi_b + i);
    }

    Snake middle_snake(std::size_t lo_a, std::size_t hi_a, std::size_t lo_b, std::size_t hi_b) {
        using diff_t = std::ptrdiff_t;
        const diff_t n = static_cast<diff_t>(hi_a - lo_a);
        const diff_t m = static_cast<diff_t>(hi_b - lo_b);
        const diff_t delta = n - m;
        const bool odd = (delta & 1) != 0;
        const diff_t max_d = (n + m + 1) / 2;
        const diff_t offset = max_d + 1;
        std::vector<diff_t> vf(static_cast<std::size_t>(2 * max_d + 3), 0);
        std::vector<diff_t> vb(vf.size(), 0);
        auto at = [offset](std::vector<diff_t>& v, diff_t k) -> diff_t& {
            return v[static_cast<std::size_t>(k + offset)];
        };
        auto a = [&](diff_t i) { return a_[lo_a + static_cast<std::size_t>(i)]; };
        auto b = [&](diff_t i) { return b_[lo_b + static_cast<std::size_t>(i)]; };
        auto local = [&](diff_t x0, diff_t y0, diff_t x1, diff_t y1) {
            return Snake{lo_a + static_cast<std::size_t>(x0), lo_b + static_cast<std::size_t>(y0),
                         lo_a + static_cast<std::size_t>(x1), lo_b + static_cast<std::size_t>(y1)};
        };

        for (diff_t d = 0; d <= max_d; ++d) {
            for (diff_t k = -d; k <= d; k += 2) {
                diff_t x = (k == -d || (k != d && at(vf, k - 1) < at(vf, k + 1))) ? at(vf, k + 1) : at(vf, k - 1) + 1;
                diff_t y = x - k;
                const diff_t x0 = x, y0 = y;
                while (x < n && y < m && a(x) == b(y)) {
                    ++x;
                    ++y;
                }
                at(vf, k) = x;
                const diff_t kb = delta - k;
                if (odd && kb >= -(d - 1) && kb <= d - 1 && x + at(vb, kb) >= n)
                    return local(x0, y0, x, y);
            }
            for (diff_t k = -d; k <= d; k += 2) {
                diff_t x = (k == -d || (k != d && at(vb, k - 1) < at(vb, k + 1))) ? at(vb, k + 1) : at(vb, k - 1) + 1;
                diff_t y = x - k;
                const diff_t x0 = x, y0 = y;
                while (x < n && y < m && a(n - 1 - x) == b(m - 1 - y)) {
                    ++x;
                    ++y;
                }
                at(vb, k) = x;
                const diff_t kf = delta - k;
                if (!odd && kf >= -d && kf <= d && at(vf, kf) + x >= n)
                    return local(n - x, m - y, n - x0, m - y0);
            }
        }
        throw Error(ErrorCode::Integrity, "diff failed to find a middle snake");
    }

    const std::vector<std::uint32_t>& a_;
    const std::vector<std::uint32_t>& b_;
    std::vector<std::pair<std::size_t, std::size_t>> out_;
};

struct LineKey {
    std::string_view text;
    bool terminated;
    bool operator==(const LineKey&) const = default;
};

struct LineKeyHash {
    std::size_t operator()(const LineKey& k) const noexcept {
        return std::hash<std::string_view>{}(k.text) * 2 + (k.terminated ? 1 : 0);
    }
};

struct RawHunk {
    std::size_t old_begin, old_end, new_begin, new_end;
};

std::vector<RawHunk> raw_hunks(std::span<const Line> old_lines, std::span<const Line> new_lines) {
    std::vector<RawHunk> out;
    std::size_t pi = 0, pj = 0;
    auto flush = [&](std::size_t i, std::size_t j) {
        if (i > pi || j > pj)
            out.push_back({pi, i, pj, j});
        pi = i + 1;
        pj = j + 1;
    };
    for (auto [i, j] : match_lines(old_lines, new_lines))
        flush(i, j);
    flush(old_lines.size(), new_lines.size());
    return out;
}

} // namespace

std::vector<std::pair<std::size_t, std::size_t>> match_lines(std::span<const Line> old_lines,
                                                             std::span<const Line> new_lines) {
    std::unordered_map<LineKey, std::uint32_t, LineKeyHash> ids;
    auto intern = [&](std::span<const Line> lines) {
        std::vector<std::uint32_t> out;
        out.reserve(lines.size());
        for (const auto& l : lines)
            out.push_back(ids.emplace(LineKey{l.text, l.terminated}, static_cast<std::uint32_t>(ids.size()))
                              .first->second);
        return out;
    };
    auto a = intern(old_lines);
    auto b = intern(new_lines);
    return Matcher(a, b).run();
}

std::vector<DiffHunk> line_diff(std::string_view old_text, std::string_view new_text) {
    auto old_lines = split_lines(old_text);
    auto new_lines = split_lines(new_text);
    std::vector<DiffHunk> hunks;
    for (const auto& r : raw_hunks(old_lines, new_lines)) {
        DiffHunk h;
        h.old_start = r.old_begin + 1;
        h.old_len = r.old_end - r.old_begin;
        h.new_start = r.new_begin + 1;
        h.new_len = r.new_end - r.new_begin;
        for (auto i = r.old_begin; i < r.old_end; ++i)
            h.removed.emplace_back(old_lines[i].text);
        for (auto j = r.new_begin; j < r.new_end; ++j)
            h.added.emplace_back(new_lines[j].text);
        h.removed_missing_eol = h.old_len > 0 && !old_lines[r.old_end - 1].terminated;
        h.added_missing_eol = h.new_len > 0 && !new_lines[r.new_end - 1].terminated;
        hunks.push_back(std::move(h));
    }
    return hunks;
}

std::string apply_hunks(std::string_view old_text, std::span<const DiffHunk> hunks) {
    auto lines = split_lines(old_text);
    std::string out;
    std::size_t pos = 0;
    for (const auto& h : hunks) {
        auto begin = h.old_start - 1;
        if (h.old_start == 0 || begin < pos || begin + h.old_len > lines.size() || h.removed.size() != h.old_len ||
            h.added.size() != h.new_len)
            throw Error(ErrorCode::Validation, "hunk does not fit the text");
        out += join_lines(std::span(lines).subspan(pos, begin - pos));
        for (std::size_t i = 0; i < h.old_len; ++i) {
            const auto& l = lines[begin + i];
            bool last = i + 1 == h.old_len;
            if (l.text != h.removed[i] || l.terminated != !(last && h.removed_missing_eol))
                throw Error(ErrorCode::Validation, "hunk removed lines do not match the text");
        }
        for (std::size_t i = 0; i < h.new_len; ++i) {
            out += h.added[i];
            if (!(i + 1 == h.new_len && h.added_missing_eol))
                out.push_back('\n');
        }
        pos = begin + h.old_len;
    }
    out += join_lines(std::span(lines).subspan(pos));
    return out;
}

std::string unified_hunks(std::string_view old_text, std::string_view new_text, std::size_t context) {
    auto old_lines = split_lines(old_text);
    auto new_lines = split_lines(new_text);
    auto raw = raw_hunks(old_lines, new_lines);
    std::string out;
    auto emit = [&out](char tag, const Line& l) {
        out.push_back(tag);
        out.append(l.text);
        out.push_back('\n');
        if (!l.terminated)
            out += "\\ No newline at end of file\n";
    };
    auto range = [](std::size_t begin, std::size_t len) {
        auto start = len == 0 ? begin : begin + 1;
        return len == 1 ? std::to_string(start) : std::to_string(start) + "," + std::to_string(len);
    };

    std::size_t g = 0;
    while (g < raw.size()) {
        auto last = g;
        while (last + 1 < raw.size() && raw[last + 1].old_begin - raw[last].old_end <= 2 * context)
            ++last;
        auto old_lo = raw[g].old_begin - std::min(context, raw[g].old_begin);
        auto new_lo = raw[g].new_begin - (raw[g].old_begin - old_lo);
        auto old_hi = std::min(old_lines.size(), raw[last].old_end + context);
        auto new_hi = raw[last].new_end + (old_hi - raw[last].old_end);
        out += "@@ -" + range(old_lo, old_hi - old_lo) + " +" + range(new_lo, new_hi - new_lo) + " @@\n";
        std::size_t i = old_lo;
        for (auto h = g; h <= last; ++h) {
            for (; i < raw[h].old_begin; ++i)
                emit(' ', old_lines[i]);
            for (auto k = raw[h].old_begin; k < raw[h].old_end; ++k)
                emit('-', old_lines[k]);
            for (auto k = raw[h].new_begin; k < raw[h].new_end; ++k)
                emit('+', new_lines[k]);
            i = raw[h].old_end;
        }
        for (; i < old_hi; ++i)
            emit(' ', old_lines[i]);
        g = last + 1;
    }
    return out;
}

} // namespace evograph
