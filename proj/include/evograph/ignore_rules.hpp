#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace evograph {

// Glob over '/'-separated relative paths. `*` and `?` never cross a '/',
// a `**` segment matches zero or more whole segments. A pattern without any
// '/' is matched against the final path segment only (`*.log` hits a/b.log).
bool glob_match(std::string_view pattern, std::string_view path);

// Name of the session directory inside the workspace. Always ignored.
inline constexpr std::string_view kSessionDirName = ".evograph";

inline constexpr std::uint64_t kDefaultMaxFileBytes = 4ull * 1024 * 1024;

struct IgnoreRules {
    std::vector<std::string> patterns;
    std::uint64_t max_file_bytes = kDefaultMaxFileBytes;

    // `.git/**`, the session directory, and common dependency/vendor dirs.
    static IgnoreRules defaults();

    bool ignores_path(std::string_view relative_path) const;
    // True when every path below the directory is ignored, so a walk may skip it.
    bool prunes_directory(std::string_view relative_dir) const;
    bool tracks(std::string_view relative_path, std::uint64_t size) const {
        return size <= max_file_bytes && !ignores_path(relative_path);
    }

    friend bool operator==(const IgnoreRules&, const IgnoreRules&) = default;
};

} // namespace evograph
