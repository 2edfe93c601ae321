#include "evograph/provenance.hpp"
#include "evograph/error.hpp"
#include "evograph/line_diff.hpp"

#include <memory>
#include <sstream>
#include <unordered_map>

namespace evograph {

std::string_view to_string(AuthorClass author) { return author == AuthorClass::AI ? "AI" : "Human"; }

AuthorClass parse_author_class(std::string_view text) {
    if (text == "AI")
        return AuthorClass::AI;
    if (text == "Human")
        return AuthorClass::Human;
    throw Error(ErrorCode::Parse, "unknown author class", std::string(text));
}

std::string_view color_token(AuthorClass author) { return author == AuthorClass::AI ? "blue" : "green"; }

std::optional<AuthorClass> author_class(CheckpointKind kind) {
    switch (kind) {
    case CheckpointKind::AiPrompt:
    case CheckpointKind::AiCodeApplied: return AuthorClass::AI;
    case CheckpointKind::ManualChange:
    case CheckpointKind::Merge: return AuthorClass::Human;
    case CheckpointKind::Origin: return std::nullopt;
    }
    return std::nullopt;
}

namespace {

constexpr int kUnattributed = -1;
using Attribution = std::shared_ptr<const std::vector<int>>;
using FileAttribution = std::map<std::string, Attribution>;

class Replay {
public:
    Replay(const DevGraph& graph, const SnapshotStore& store) : graph_(graph), store_(store) {}

    ProvenanceMap run() {
        const auto& active = graph_.active();
        auto ancestry = graph_.ancestors(active);
        for (const auto& id : graph_.topological_order())
            if (ancestry.contains(id))
                order_.push_back(id);
        for (std::size_t i = 0; i < order_.size(); ++i)
            index_[order_[i]] = static_cast<int>(i);
        for (const auto& id : order_)
            memo_[id] = attribute(graph_.at(id));

        ProvenanceMap pmap;
        pmap.computed_against = graph_.origin();
        pmap.active = active;
        const auto& origin_snap = snapshot(graph_.at(graph_.origin()).snapshot);
        const auto& active_snap = snapshot(graph_.at(active).snapshot);
        const auto& final_attr = memo_.at(active);

        for (const auto& [path, blob] : active_snap.entries) {
            const auto& bytes = content(blob);
            if (is_binary(bytes))
                continue;
            auto lines = split_lines(bytes);
            pmap.line_counts[path] = lines.size();

            std::string origin_bytes;
            if (auto it = origin_snap.entries.find(path); it != origin_snap.entries.end())
                origin_bytes = content(it->second);
            if (is_binary(origin_bytes))
                origin_bytes.clear();
            std::vector<bool> changed(lines.size(), true);
            for (auto [i, j] : match_lines(split_lines(origin_bytes), lines))
                changed[j] = false;

            const auto& attr = *final_attr.at(path);
            std::vector<ProvenanceSpan> spans;
            for (std::size_t j = 0; j < lines.size(); ++j) {
                if (!changed[j])
                    continue;
                int who = attr[j] != kUnattributed ? attr[j] : last_writer_of(path);
                const auto& cp = graph_.at(order_[static_cast<std::size_t>(who)]);
                if (!spans.empty() && spans.back().line_end == j && spans.back().responsible == cp.id) {
                    spans.back().line_end = j + 1;
                    continue;
                }
                spans.push_back({path, j + 1, j + 1, cp.id, author_class(cp.kind).value_or(AuthorClass::Human)});
            }
            if (!spans.empty())
                pmap.files.emplace(path, std::move(spans));
        }
        return pmap;
    }

private:
    const Snapshot& snapshot(const SnapshotId& id) {
        auto it = snapshots_.find(id.str());
        if (it == snapshots_.end())
            it = snapshots_.emplace(id.str(), store_.load(id)).first;
        return it->second;
    }

    const std::string& content(const BlobId& id) {
        auto it = blobs_.find(id.str());
        if (it == blobs_.end())
            it = blobs_.emplace(id.str(), store_.read_blob(id)).first;
        return it->second;
    }

    // Text content and attribution of path in a replayed checkpoint; empty
    // when absent or binary there.
    std::pair<std::string_view, Attribution> parent_file(const Checkpoint& parent, const std::string& path) {
        const auto& snap = snapshot(parent.snapshot);
        auto it = snap.entries.find(path);
        if (it == snap.entries.end())
            return {{}, nullptr};
        const auto& attr = memo_.at(parent.id);
        auto a = attr.find(path);
        if (a == attr.end())
            return {{}, nullptr};
        return {content(it->second), a->second};
    }

    FileAttribution attribute(const Checkpoint& cp) {
        FileAttribution out;
        const auto& snap = snapshot(cp.snapshot);
        const int self = index_.at(cp.id);
        std::vector<const Checkpoint*> parents;
        for (const auto& p : cp.parents)
            parents.push_back(&graph_.at(p));

        for (const auto& [path, blob] : snap.entries) {
            const auto& bytes = content(blob);
            if (is_binary(bytes))
                continue;
            Attribution reused;
            for (const auto* parent : parents) {
                const auto& psnap = snapshot(parent->snapshot);
                auto it = psnap.entries.find(path);
                if (it != psnap.entries.end() && it->second == blob) {
                    reused = memo_.at(parent->id).at(path);
                    break;
                }
            }
            if (reused) {
                out.emplace(path, std::move(reused));
                continue;
            }
            auto lines = split_lines(bytes);
            auto attr = std::make_shared<std::vector<int>>(lines.size(), cp.kind == CheckpointKind::Origin ? kUnattributed : self);
            std::vector<bool> assigned(lines.size(), false);
            // Each further parent only competes for lines no earlier parent claimed.
            for (const auto* parent : parents) {
                auto [pbytes, pattr] = parent_file(*parent, path);
                if (!pattr)
                    continue;
                std::vector<Line> open_lines;
                std::vector<std::size_t> open_index;
                for (std::size_t j = 0; j < lines.size(); ++j) {
                    if (!assigned[j]) {
                        open_lines.push_back(lines[j]);
                        open_index.push_back(j);
                    }
                }
                for (auto [i, k] : match_lines(split_lines(pbytes), open_lines)) {
                    auto j = open_index[k];
                    (*attr)[j] = (*pattr)[i];
                    assigned[j] = true;
                }
            }
            out.emplace(path, std::move(attr));
        }
        return out;
    }

    // Latest replayed checkpoint whose content of path differs from all of its
    // parents. Used for a changed line whose replayed owner is Origin, which
    // happens when successive diffs align a line differently than the direct
    // Origin-vs-active diff does.
    int last_writer_of(const std::string& path) {
        for (auto i = order_.size(); i-- > 0;) {
            const auto& cp = graph_.at(order_[i]);
            if (cp.kind == CheckpointKind::Origin)
                break;
            const auto& snap = snapshot(cp.snapshot);
            auto own = snap.entries.find(path);
            bool differs = true;
            for (const auto& p : cp.parents) {
                const auto& psnap = snapshot(graph_.at(p).snapshot);
                auto it = psnap.entries.find(path);
                bool same = (it == psnap.entries.end() && own == snap.entries.end()) ||
                            (it != psnap.entries.end() && own != snap.entries.end() && it->second == own->second);
                if (same)
                    differs = false;
            }
            if (differs && own != snap.entries.end())
                return static_cast<int>(i);
        }
        return index_.at(graph_.active());
    }

    const DevGraph& graph_;
    const SnapshotStore& store_;
    std::vector<CheckpointId> order_;
    std::map<CheckpointId, int> index_;
    std::map<CheckpointId, FileAttribution> memo_;
    std::unordered_map<std::string, Snapshot> snapshots_;
    std::unordered_map<std::string, std::string> blobs_;
};

} // namespace

ProvenanceMap compute_provenance(const DevGraph& graph, const SnapshotStore& store) {
    if (graph.empty())
        throw Error(ErrorCode::Integrity, "graph is not initialized");
    return Replay(graph, store).run();
}

LineInfo line_info(const DevGraph& graph, const ProvenanceMap& pmap, std::string_view path, std::size_t line) {
    auto count = pmap.line_counts.find(std::string(path));
    if (count == pmap.line_counts.end())
        throw Error(ErrorCode::NotFound, "no text file with this path in the active checkpoint", std::string(path));
    if (line == 0 || line > count->second)
        throw Error(ErrorCode::Range, "line is outside the file",
                    std::string(path) + ":" + std::to_string(line) + " of " + std::to_string(count->second));
    LineInfo info;
    auto spans = pmap.files.find(std::string(path));
    if (spans == pmap.files.end())
        return info;
    for (const auto& s : spans->second) {
        if (line < s.line_start || line > s.line_end)
            continue;
        const auto& cp = graph.at(s.responsible);
        info.unchanged = false;
        info.checkpoint = cp.id;
        info.title = cp.title;
        info.description = cp.description;
        info.kind = cp.kind;
        info.created_at = cp.created_at;
        info.author = s.author;
        break;
    }
    return info;
}

ProvenanceSummary provenance_summary(const ProvenanceMap& pmap) {
    ProvenanceSummary summary;
    for (const auto& [path, lines] : pmap.line_counts) {
        LineCounts counts;
        if (auto it = pmap.files.find(path); it != pmap.files.end()) {
            for (const auto& s : it->second) {
                auto n = s.line_end - s.line_start + 1;
                (s.author == AuthorClass::AI ? counts.ai_lines : counts.human_lines) += n;
            }
        }
        counts.unchanged_lines = lines - counts.ai_lines - counts.human_lines;
        summary.total.ai_lines += counts.ai_lines;
        summary.total.human_lines += counts.human_lines;
        summary.total.unchanged_lines += counts.unchanged_lines;
        summary.files.emplace(path, counts);
    }
    return summary;
}

std::string render_review(const DevGraph& graph, const ProvenanceMap& pmap) {
    auto summary = provenance_summary(pmap);
    std::ostringstream out;
    out << "review of " << pmap.active.str() << " against origin " << pmap.computed_against.str() << "\n";
    for (const auto& [path, spans] : pmap.files) {
        const auto& c = summary.files.at(path);
        out << "\n" << path << "  (ai " << c.ai_lines << ", human " << c.human_lines << ", unchanged "
            << c.unchanged_lines << ")\n";
        for (const auto& s : spans) {
            const auto& cp = graph.at(s.responsible);
            auto range = "L" + std::to_string(s.line_start) +
                         (s.line_end != s.line_start ? "-" + std::to_string(s.line_end) : std::string{});
            out << "  " << range << std::string(range.size() < 10 ? 10 - range.size() : 1, ' ') << to_string(s.author)
                << (s.author == AuthorClass::AI ? "     " : "  ") << cp.id.str() << "  " << format_timestamp(cp.created_at)
                << "  " << cp.title << "\n";
        }
    }
    out << "\ntotal: ai " << summary.total.ai_lines << ", human " << summary.total.human_lines << ", unchanged "
        << summary.total.unchanged_lines << "\n";
    return out.str();
}

} // namespace evograph
