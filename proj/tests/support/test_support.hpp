#pragma once

#include "evograph/core.hpp"
#include "evograph/ignore_rules.hpp"

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace evograph::testing {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    fs::path path_;
};

void write_tree(const fs::path& root, const std::map<std::string, std::string>& files);
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

// Every regular file below root keyed by '/'-separated relative path,
// skipping the session directory.
std::map<std::string, std::string> read_tree(const fs::path& root);

// 2025-01-01T00:00:00Z, advancing one second per call.
Clock fixed_clock();

// Lines drawn from a small vocabulary so diffs have plenty of matches.
std::string random_text(std::mt19937_64& rng, std::size_t max_lines);
// A few random line insertions, deletions and replacements.
std::string mutate_text(std::mt19937_64& rng, const std::string& text);

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi);

} // namespace evograph::testing
