#include "test_support.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evograph::testing {

TempDir::TempDir() {
    auto pattern = (fs::temp_directory_path() / "evograph-test-XXXXXX").string();
    if (!mkdtemp(pattern.data()))
        throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::permissions(path_, fs::perms::owner_all, fs::perm_options::add, ec);
    fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_tree(const fs::path& root, const std::map<std::string, std::string>& files) {
    for (const auto& [rel, text] : files)
        write_text(root / rel, text);
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
        auto rel = fs::relative(it->path(), root).generic_string();
        if (it->is_directory() && rel == kSessionDirName) {
            it.disable_recursion_pending();
            continue;
        }
        if (it->is_regular_file())
            out[rel] = read_text(it->path());
    }
    return out;
}

Clock fixed_clock() { return stepping_clock(parse_timestamp("2025-01-01T00:00:00.000Z"), std::chrono::seconds(1)); }

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

namespace {

const std::vector<std::string> kWords = {"alpha", "beta", "gamma", "delta", "", "}", "return x;", "  indent", "x = 1"};

std::vector<std::string> split(const std::string& text, bool& terminated) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    terminated = true;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(start));
            terminated = false;
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::string join(const std::vector<std::string>& lines, bool terminated) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out += lines[i];
        if (i + 1 < lines.size() || terminated)
            out += '\n';
    }
    return out;
}

} // namespace

std::string random_text(std::mt19937_64& rng, std::size_t max_lines) {
    std::vector<std::string> lines(uniform(rng, 0, max_lines));
    for (auto& l : lines) {
        l = kWords[uniform(rng, 0, kWords.size() - 1)];
        if (uniform(rng, 0, 9) == 0)
            l += "\r";
    }
    return join(lines, lines.empty() || uniform(rng, 0, 4) != 0);
}

std::string mutate_text(std::mt19937_64& rng, const std::string& text) {
    bool terminated = true;
    auto lines = split(text, terminated);
    auto edits = uniform(rng, 1, 3);
    for (std::size_t e = 0; e < edits; ++e) {
        auto pos = uniform(rng, 0, lines.size());
        auto word = kWords[uniform(rng, 0, kWords.size() - 1)] + std::to_string(uniform(rng, 0, 99));
        switch (uniform(rng, 0, 2)) {
        case 0:
            lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(pos), word);
            break;
        case 1:
            if (pos < lines.size())
                lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(pos));
            break;
        default:
            if (pos < lines.size())
                lines[pos] = word;
            else
                lines.push_back(word);
        }
    }
    if (uniform(rng, 0, 9) == 0)
        terminated = !terminated;
    if (lines.empty())
        terminated = true;
    return join(lines, terminated);
}

} // namespace evograph::testing
