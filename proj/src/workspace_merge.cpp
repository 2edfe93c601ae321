#include "evograph/error.hpp"
#include "evograph/workspace.hpp"

#include <set>
#include <unordered_set>

namespace evograph {

std::string merge_notice(std::string_view other_title, std::string_view summary) {
    std::string text = "Merged another branch: \"" + std::string(other_title) + "\".\n";
    text += "Summary of that branch's conversation:";
    if (!summary.empty()) {
        text += "\n";
        text += summary;
    }
    return text;
}

namespace {

struct PathMerge {
    std::optional<std::string> content;
    bool conflicted = false;
};

std::size_t count_novel_lines(std::string_view proposal, std::initializer_list<std::string_view> inputs) {
    std::unordered_set<std::string_view> known;
    for (auto text : inputs)
        for (const auto& l : split_lines(text))
            known.insert(l.text);
    std::size_t novel = 0;
    for (const auto& l : split_lines(proposal))
        if (!known.contains(l.text))
            ++novel;
    return novel;
}

} // namespace

MergeResult Workspace::merge_with(const CheckpointId& other_id) {
    const auto& active = state_.graph.active_checkpoint();
    const auto& other = state_.graph.at(other_id);
    if (other.id == active.id)
        throw Error(ErrorCode::Validation, "cannot merge a checkpoint with itself", other.id.str());

    MergeResult result;
    result.lca = state_.graph.lowest_common_ancestor(active.id, other.id);
    const auto& lca = state_.graph.at(result.lca);
    auto base = store_.load(lca.snapshot);
    auto ours = store_.load(active.snapshot);
    auto theirs = store_.load(other.snapshot);

    std::set<std::string> paths;
    for (const auto* snap : {&base, &ours, &theirs})
        for (const auto& [p, b] : snap->entries)
            paths.insert(p);

    auto blob_of = [](const Snapshot& s, const std::string& path) -> std::optional<BlobId> {
        auto it = s.entries.find(path);
        return it == s.entries.end() ? std::nullopt : std::optional(it->second);
    };

    std::map<std::string, BlobId> merged;
    for (const auto& path : paths) {
        auto b = blob_of(base, path);
        auto o = blob_of(ours, path);
        auto t = blob_of(theirs, path);
        std::optional<BlobId> pick;
        if (o == t || b == t) {
            pick = o;
        } else if (b == o) {
            pick = t;
        } else {
            result.conflicted_paths.push_back(path);
            auto bt = b ? store_.read_blob(*b) : std::string{};
            auto ot = o ? store_.read_blob(*o) : std::string{};
            auto tt = t ? store_.read_blob(*t) : std::string{};
            if (is_binary(bt) || is_binary(ot) || is_binary(tt)) {
                result.warnings.push_back("binary file " + path + " changed on both sides; kept the active version");
                pick = o;
            } else {
                auto outcome = three_way_merge(bt, ot, tt, ConflictStyle::Diff3Markers);
                std::string text = outcome.merged;
                if (outcome.clean()) {
                    result.conflicted_paths.pop_back();
                } else {
                    try {
                        auto proposal = gateway_->merge_files(
                            {path, bt, line_diff(bt, ot), line_diff(bt, tt), outcome.conflicts});
                        if (auto novel = count_novel_lines(proposal, {bt, ot, tt}); novel > 0) {
                            result.warnings.push_back("merge proposal for " + path + " has " + std::to_string(novel) +
                                                      " line(s) found in neither branch nor the common ancestor");
                            if (state_.settings.accept_novel_merge_lines)
                                text = std::move(proposal);
                        } else {
                            text = std::move(proposal);
                        }
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::Gateway)
                            throw;
                        result.gateway_failed = true;
                        result.warnings.push_back("assistant could not merge " + path + "; left conflict markers (" +
                                                  e.what() + ")");
                    }
                }
                if (!text.empty() || (o && t))
                    pick = store_.blobs().put(text);
            }
        }
        if (pick)
            merged.emplace(path, *pick);
    }
    auto snap = store_.make_snapshot(std::move(merged));

    // Chats: keep ours, summarize what the other branch discussed since the fork.
    const auto& our_chat = state_.chats.at(active.chat);
    auto post_fork = messages_not_in(state_.chats.at(other.chat), state_.chats.at(lca.chat));
    std::vector<ChatMessage> their_new;
    for (auto& m : post_fork)
        if (!our_chat.contains(m.id))
            their_new.push_back(std::move(m));
    std::string summary;
    if (!their_new.empty()) {
        try {
            summary = gateway_->summarize_conversation(their_new);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Gateway)
                throw;
            result.gateway_failed = true;
            result.warnings.push_back(std::string("assistant could not summarize the merged chat (") + e.what() + ")");
            for (const auto& m : their_new) {
                if (m.role != Role::User)
                    continue;
                if (!summary.empty())
                    summary += "\n";
                summary += m.text;
            }
        }
    }

    std::string description = "Merged \"" + other.title + "\" into \"" + active.title + "\".\n\nActive branch: " +
                              active.description + "\nMerged branch: " + other.description;
    if (!result.conflicted_paths.empty()) {
        description += "\nOverlapping edits in:";
        for (const auto& p : result.conflicted_paths)
            description += " " + p;
    }
    auto title = clamp_title(active.title + " + " + other.title);

    store_.restore(snap, root_, state_.settings.ignore);
    remember(snap);

    ChatMessage notice;
    notice.id = MessageId{next_id()};
    notice.role = Role::System;
    notice.text = merge_notice(other.title, summary);
    notice.created_at = now();
    ChatSession chat{ChatId{next_id()}, our_chat.messages};
    chat.messages.push_back(notice);

    Checkpoint cp;
    cp.id = CheckpointId{next_id()};
    cp.kind = CheckpointKind::Merge;
    cp.parents = {active.id, other.id};
    cp.snapshot = snap.id;
    cp.chat = chat.id;
    cp.title = std::move(title);
    cp.description = std::move(description);
    cp.created_at = now();
    state_.chats.insert(std::move(chat));
    const auto& added = state_.graph.add(std::move(cp));
    result.checkpoint = added.id;
    commit({{EventKind::ChatAppended, {added.chat.str(), notice.id.str()}},
            {EventKind::GraphChanged, {added.id.str()}},
            {EventKind::ActiveChanged, {added.id.str()}}});
    return result;
}

} // namespace evograph
