#include "evograph/snapshot_store.hpp"
#include "evograph/error.hpp"
#include "evograph/sha256.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace evograph {

namespace {

bool is_hex_digest(std::string_view s) {
    return s.size() == 64 && std::all_of(s.begin(), s.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

bool is_valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t n = c < 0x80 ? 0 : (c >> 5) == 0x6 ? 1 : (c >> 4) == 0xE ? 2 : (c >> 3) == 0x1E ? 3 : 4;
        if (n == 4 || i + n >= s.size() + (n == 0 ? 1 : 0))
            return false;
        for (std::size_t k = 1; k <= n; ++k)
            if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2)
                return false;
        i += n + 1;
    }
    return true;
}

void remove_empty_parents(const fs::path& root, fs::path dir) {
    std::error_code ec;
    while (!dir.empty() && dir != root && dir.lexically_relative(root).native() != ".") {
        if (!fs::is_directory(dir, ec) || !fs::is_empty(dir, ec))
            return;
        fs::remove(dir, ec);
        if (ec)
            return;
        dir = dir.parent_path();
    }
}

} // namespace

std::string read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Io, "cannot open file for reading", path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw Error(ErrorCode::Io, "read failed", path.string());
    return std::move(ss).str();
}

void write_file_bytes(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::Io, "cannot open file for writing", path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out)
        throw Error(ErrorCode::Io, "write failed", path.string());
}

bool is_binary(std::string_view bytes) {
    return bytes.substr(0, 8000).find('\0') != std::string_view::npos;
}

bool is_normalized_relative_path(std::string_view path) {
    if (path.empty() || path.front() == '/' || path.back() == '/' || path.find('\\') != std::string_view::npos)
        return false;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto slash = std::min(path.find('/', start), path.size());
        auto seg = path.substr(start, slash - start);
        if (seg.empty() || seg == "." || seg == "..")
            return false;
        start = slash + 1;
    }
    return true;
}

// --- BlobStore ---------------------------------------------------------------

BlobStore::BlobStore(fs::path dir) : dir_(std::move(dir)) {}

fs::path BlobStore::path_of(const BlobId& id) const {
    if (!is_hex_digest(id.str()))
        throw Error(ErrorCode::Corruption, "malformed blob id", id.str());
    return dir_ / id.str().substr(0, 2) / id.str();
}

BlobId BlobStore::put(std::string_view bytes) {
    BlobId id{sha256_hex(bytes)};
    auto target = path_of(id);
    std::error_code ec;
    if (fs::exists(target, ec))
        return id;
    fs::create_directories(target.parent_path(), ec);
    if (ec)
        throw Error(ErrorCode::Io, "cannot create blob directory", target.parent_path().string());
    auto tmp = target;
    tmp += ".tmp";
    write_file_bytes(tmp, bytes);
    fs::rename(tmp, target, ec);
    if (ec)
        throw Error(ErrorCode::Io, "cannot store blob", target.string());
    return id;
}

std::optional<std::string> BlobStore::get(const BlobId& id) const {
    auto p = path_of(id);
    std::error_code ec;
    if (!fs::is_regular_file(p, ec))
        return std::nullopt;
    return read_file_bytes(p);
}

bool BlobStore::contains(const BlobId& id) const {
    std::error_code ec;
    return is_hex_digest(id.str()) && fs::is_regular_file(path_of(id), ec);
}

std::vector<BlobId> BlobStore::list() const {
    std::vector<BlobId> out;
    std::error_code ec;
    if (!fs::is_directory(dir_, ec))
        return out;
    for (const auto& shard : fs::directory_iterator(dir_)) {
        if (!shard.is_directory())
            continue;
        for (const auto& entry : fs::directory_iterator(shard.path())) {
            auto name = entry.path().filename().string();
            if (entry.is_regular_file() && is_hex_digest(name))
                out.emplace_back(name);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool BlobStore::remove(const BlobId& id) {
    std::error_code ec;
    auto p = path_of(id);
    bool removed = fs::remove(p, ec);
    if (removed) {
        std::error_code ignored;
        if (fs::is_empty(p.parent_path(), ignored))
            fs::remove(p.parent_path(), ignored);
    }
    return removed;
}

// --- manifests and scanning --------------------------------------------------

std::string canonical_manifest(const std::map<std::string, BlobId>& entries) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [path, blob] : entries)
        j[path] = blob.str();
    return j.dump(2) + "\n";
}

std::vector<std::string> list_tracked_files(const fs::path& root, const IgnoreRules& rules,
                                            std::vector<SkippedFile>* skipped) {
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw Error(ErrorCode::Io, "workspace root is not a readable directory", root.string());

    std::vector<std::string> out;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec)
        throw Error(ErrorCode::Io, "cannot read workspace root", root.string());
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec)
            throw Error(ErrorCode::Io, "directory walk failed", ec.message());
        const auto& entry = *it;
        auto rel = entry.path().lexically_relative(root).generic_string();
        std::error_code sec;
        auto status = entry.symlink_status(sec);
        if (fs::is_directory(status)) {
            if (rules.prunes_directory(rel))
                it.disable_recursion_pending();
            continue;
        }
        if (rules.ignores_path(rel))
            continue;
        if (!fs::is_regular_file(status)) {
            if (skipped)
                skipped->push_back({rel, fs::is_symlink(status) ? "symlink" : "not a regular file"});
            continue;
        }
        if (!is_valid_utf8(rel)) {
            if (skipped)
                skipped->push_back({rel, "path is not valid UTF-8"});
            continue;
        }
        auto size = entry.file_size(sec);
        if (sec) {
            if (skipped)
                skipped->push_back({rel, sec.message()});
            continue;
        }
        if (size > rules.max_file_bytes) {
            if (skipped)
                skipped->push_back({rel, "larger than " + std::to_string(rules.max_file_bytes) + " bytes"});
            continue;
        }
        out.push_back(std::move(rel));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// --- SnapshotStore -----------------------------------------------------------

SnapshotStore::SnapshotStore(fs::path session_dir)
    : snapshots_dir_(session_dir / "snapshots"), blobs_(session_dir / "blobs") {}

fs::path SnapshotStore::manifest_path(const SnapshotId& id) const {
    if (!is_hex_digest(id.str()))
        throw Error(ErrorCode::NotFound, "unknown snapshot", id.str());
    return snapshots_dir_ / (id.str() + ".json");
}

CaptureResult SnapshotStore::capture(const fs::path& root, const IgnoreRules& rules) {
    CaptureResult result;
    std::map<std::string, BlobId> entries;
    for (auto& rel : list_tracked_files(root, rules, &result.skipped)) {
        std::string bytes;
        try {
            bytes = read_file_bytes(root / rel);
        } catch (const Error& e) {
            result.skipped.push_back({rel, e.what()});
            continue;
        }
        entries.emplace(std::move(rel), blobs_.put(bytes));
    }
    result.snapshot = make_snapshot(std::move(entries));
    return result;
}

Snapshot SnapshotStore::make_snapshot(std::map<std::string, BlobId> entries) {
    for (const auto& [path, blob] : entries) {
        if (!is_normalized_relative_path(path))
            throw Error(ErrorCode::Validation, "snapshot path must be normalized and relative", path);
        if (!blobs_.contains(blob))
            throw Error(ErrorCode::Corruption, "snapshot references a missing blob", blob.str());
    }
    auto manifest = canonical_manifest(entries);
    Snapshot snap{SnapshotId{sha256_hex(manifest)}, std::move(entries)};
    auto target = manifest_path(snap.id);
    std::error_code ec;
    if (!fs::exists(target, ec)) {
        fs::create_directories(snapshots_dir_, ec);
        auto tmp = target;
        tmp += ".tmp";
        write_file_bytes(tmp, manifest);
        fs::rename(tmp, target, ec);
        if (ec)
            throw Error(ErrorCode::Io, "cannot store snapshot manifest", target.string());
    }
    return snap;
}

Snapshot SnapshotStore::make_snapshot_from_contents(const std::map<std::string, std::string>& files) {
    std::map<std::string, BlobId> entries;
    for (const auto& [path, bytes] : files)
        entries.emplace(path, blobs_.put(bytes));
    return make_snapshot(std::move(entries));
}

Snapshot SnapshotStore::load(const SnapshotId& id) const {
    auto p = manifest_path(id);
    std::error_code ec;
    if (!fs::is_regular_file(p, ec))
        throw Error(ErrorCode::NotFound, "unknown snapshot", id.str());
    auto text = read_file_bytes(p);
    Snapshot snap{id, {}};
    try {
        auto j = nlohmann::json::parse(text);
        for (auto& [path, digest] : j.items())
            snap.entries.emplace(path, BlobId{digest.get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Corruption, "snapshot manifest is not valid", id.str() + ": " + e.what());
    }
    if (sha256_hex(text) != id.str())
        throw Error(ErrorCode::Corruption, "snapshot manifest does not match its id", id.str());
    return snap;
}

bool SnapshotStore::contains(const SnapshotId& id) const {
    std::error_code ec;
    return is_hex_digest(id.str()) && fs::is_regular_file(manifest_path(id), ec);
}

std::vector<SnapshotId> SnapshotStore::list() const {
    std::vector<SnapshotId> out;
    std::error_code ec;
    if (!fs::is_directory(snapshots_dir_, ec))
        return out;
    for (const auto& entry : fs::directory_iterator(snapshots_dir_)) {
        auto p = entry.path();
        if (p.extension() == ".json" && is_hex_digest(p.stem().string()))
            out.emplace_back(p.stem().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::string> SnapshotStore::read_file(const Snapshot& snap, std::string_view path) const {
    auto it = snap.entries.find(std::string(path));
    if (it == snap.entries.end())
        return std::nullopt;
    return read_blob(it->second);
}

std::string SnapshotStore::read_blob(const BlobId& id) const {
    auto bytes = blobs_.get(id);
    if (!bytes)
        throw Error(ErrorCode::Corruption, "missing blob", id.str());
    return std::move(*bytes);
}

RestoreReport SnapshotStore::restore(const Snapshot& snap, const fs::path& root, const IgnoreRules& rules) const {
    for (const auto& [path, blob] : snap.entries)
        if (!blobs_.contains(blob))
            throw Error(ErrorCode::Corruption, "missing blob", path + " -> " + blob.str());

    RestoreReport report;
    auto describe = [&report] {
        std::ostringstream ss;
        ss << report.written.size() << " written, " << report.deleted.size() << " deleted before failure";
        return ss.str();
    };
    try {
        for (const auto& rel : list_tracked_files(root, rules)) {
            if (snap.entries.contains(rel))
                continue;
            std::error_code ec;
            fs::remove(root / rel, ec);
            if (ec)
                throw Error(ErrorCode::Io, "cannot delete file", rel);
            report.deleted.push_back(rel);
            remove_empty_parents(root, (root / rel).parent_path());
        }
        for (const auto& [rel, blob] : snap.entries) {
            auto target = root / rel;
            auto wanted = read_blob(blob);
            std::error_code ec;
            if (fs::is_regular_file(target, ec)) {
                if (read_file_bytes(target) == wanted)
                    continue;
            } else if (fs::exists(target, ec)) {
                throw Error(ErrorCode::Io, "path is occupied by a non-file", rel);
            }
            fs::create_directories(target.parent_path(), ec);
            if (ec)
                throw Error(ErrorCode::Io, "cannot create directory", target.parent_path().string());
            write_file_bytes(target, wanted);
            report.written.push_back(rel);
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Io)
            throw;
        throw Error(ErrorCode::Io, std::string("partial restore: ") + e.what(), e.detail() + "; " + describe());
    }
    return report;
}

std::size_t SnapshotStore::collect_garbage(const std::set<SnapshotId>& live) {
    std::set<BlobId> referenced;
    for (const auto& id : live)
        for (const auto& [path, blob] : load(id).entries)
            referenced.insert(blob);

    for (const auto& id : list()) {
        if (!live.contains(id)) {
            std::error_code ec;
            fs::remove(manifest_path(id), ec);
        }
    }
    std::size_t reclaimed = 0;
    for (const auto& blob : blobs_.list())
        if (!referenced.contains(blob) && blobs_.remove(blob))
            ++reclaimed;
    return reclaimed;
}

} // namespace evograph
