#include "evograph/ignore_rules.hpp"

#include <span>

namespace evograph {

namespace {

std::vector<std::string_view> split_segments(std::string_view path) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto slash = path.find('/', start);
        if (slash == std::string_view::npos)
            slash = path.size();
        if (slash > start)
            out.push_back(path.substr(start, slash - start));
        start = slash + 1;
    }
    return out;
}

bool segment_match(std::string_view pat, std::string_view text) {
    std::size_t p = 0, t = 0;
    std::size_t star_p = std::string_view::npos, star_t = 0;
    while (t < text.size()) {
        if (p < pat.size() && (pat[p] == '?' || pat[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pat.size() && pat[p] == '*') {
            star_p = p++;
            star_t = t;
        } else if (star_p != std::string_view::npos) {
            p = star_p + 1;
            t = ++star_t;
        } else {
            return false;
        }
    }
    while (p < pat.size() && pat[p] == '*')
        ++p;
    return p == pat.size();
}

bool segments_match(std::span<const std::string_view> pat, std::span<const std::string_view> path) {
    if (pat.empty())
        return path.empty();
    if (pat.front() == "**") {
        for (std::size_t skip = 0; skip <= path.size(); ++skip)
            if (segments_match(pat.subspan(1), path.subspan(skip)))
                return true;
        return false;
    }
    if (path.empty() || !segment_match(pat.front(), path.front()))
        return false;
    return segments_match(pat.subspan(1), path.subspan(1));
}

} // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
    auto pat = split_segments(pattern);
    auto segs = split_segments(path);
    if (pattern.find('/') == std::string_view::npos)
        return !segs.empty() && pat.size() == 1 && segment_match(pat.front(), segs.back());
    return segments_match(pat, segs);
}

IgnoreRules IgnoreRules::defaults() {
    return IgnoreRules{
        {".git/**", std::string(kSessionDirName) + "/**", "**/node_modules/**", "**/.venv/**", "**/venv/**",
         "**/__pycache__/**", "**/vendor/**"},
        kDefaultMaxFileBytes};
}

bool IgnoreRules::ignores_path(std::string_view relative_path) const {
    auto segs = split_segments(relative_path);
    if (!segs.empty() && segs.front() == kSessionDirName)
        return true;
    for (const auto& p : patterns)
        if (glob_match(p, relative_path))
            return true;
    return false;
}

bool IgnoreRules::prunes_directory(std::string_view relative_dir) const {
    if (relative_dir == kSessionDirName)
        return true;
    // A directory is pruned by `<dir-glob>/**` patterns only.
    auto dir = split_segments(relative_dir);
    for (const auto& p : patterns) {
        std::string_view pv = p;
        if (pv.size() > 3 && pv.ends_with("/**") && segments_match(split_segments(pv.substr(0, pv.size() - 3)), dir))
            return true;
    }
    return false;
}

} // namespace evograph
