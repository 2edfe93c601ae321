#pragma once

#include "evograph/core.hpp"
#include "evograph/ignore_rules.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace evograph {

namespace fs = std::filesystem;

// Immutable capture of all tracked files. The id is the SHA-256 of the
// canonical manifest, so equal entries always mean equal ids.
struct Snapshot {
    SnapshotId id;
    std::map<std::string, BlobId> entries;

    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct SkippedFile {
    std::string path;
    std::string reason;
};

struct CaptureResult {
    Snapshot snapshot;
    std::vector<SkippedFile> skipped;
};

struct RestoreReport {
    std::vector<std::string> written;
    std::vector<std::string> deleted;
};

// Content-addressed byte storage: `<dir>/<first2>/<digest>`.
class BlobStore {
public:
    explicit BlobStore(fs::path dir);

    BlobId put(std::string_view bytes);
    std::optional<std::string> get(const BlobId& id) const;
    bool contains(const BlobId& id) const;
    std::vector<BlobId> list() const;
    bool remove(const BlobId& id);

    const fs::path& dir() const noexcept { return dir_; }

private:
    fs::path path_of(const BlobId& id) const;

    fs::path dir_;
};

// Relative, '/'-separated, no `.`/`..`/empty segments, not absolute.
bool is_normalized_relative_path(std::string_view path);

// Canonical manifest text: JSON object {path: digest}, keys sorted, 2-space
// indent, trailing newline.
std::string canonical_manifest(const std::map<std::string, BlobId>& entries);

// Relative paths of all tracked regular files under root, sorted.
std::vector<std::string> list_tracked_files(const fs::path& root, const IgnoreRules& rules,
                                            std::vector<SkippedFile>* skipped = nullptr);

bool is_binary(std::string_view bytes);

// Snapshot manifests and blobs below a session directory:
//   <session>/blobs/<first2>/<digest>
//   <session>/snapshots/<id>.json
// Reads are safe from several threads; writes need external serialization.
class SnapshotStore {
public:
    explicit SnapshotStore(fs::path session_dir);

    CaptureResult capture(const fs::path& root, const IgnoreRules& rules);
    Snapshot make_snapshot(std::map<std::string, BlobId> entries);
    Snapshot make_snapshot_from_contents(const std::map<std::string, std::string>& files);

    Snapshot load(const SnapshotId& id) const;
    bool contains(const SnapshotId& id) const;
    std::vector<SnapshotId> list() const;

    // nullopt when the path is not part of the snapshot.
    std::optional<std::string> read_file(const Snapshot& snap, std::string_view path) const;
    std::string read_blob(const BlobId& id) const;

    RestoreReport restore(const Snapshot& snap, const fs::path& root, const IgnoreRules& rules) const;

    // Removes snapshot manifests outside `live` and every blob no live
    // snapshot references. Returns the number of blobs reclaimed.
    std::size_t collect_garbage(const std::set<SnapshotId>& live);

    BlobStore& blobs() noexcept { return blobs_; }
    const BlobStore& blobs() const noexcept { return blobs_; }

private:
    fs::path manifest_path(const SnapshotId& id) const;

    fs::path snapshots_dir_;
    BlobStore blobs_;
};

std::string read_file_bytes(const fs::path& path);
void write_file_bytes(const fs::path& path, std::string_view bytes);

} // namespace evograph
