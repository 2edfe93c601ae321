#include "evograph/history_graph.hpp"
#include "evograph/error.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

namespace evograph {

std::string_view to_string(CheckpointKind kind) {
    switch (kind) {
    case CheckpointKind::Origin: return "Origin";
    case CheckpointKind::ManualChange: return "ManualChange";
    case CheckpointKind::AiPrompt: return "AiPrompt";
    case CheckpointKind::AiCodeApplied: return "AiCodeApplied";
    case CheckpointKind::Merge: return "Merge";
    }
    return "?";
}

CheckpointKind parse_checkpoint_kind(std::string_view text) {
    for (auto k : {CheckpointKind::Origin, CheckpointKind::ManualChange, CheckpointKind::AiPrompt,
                   CheckpointKind::AiCodeApplied, CheckpointKind::Merge})
        if (to_string(k) == text)
            return k;
    throw Error(ErrorCode::Parse, "unknown checkpoint kind", std::string(text));
}

std::string_view color_token(CheckpointKind kind) {
    switch (kind) {
    case CheckpointKind::Origin: return "origin";
    case CheckpointKind::AiPrompt: return "prompt";
    case CheckpointKind::AiCodeApplied: return "ai-code";
    case CheckpointKind::ManualChange:
    case CheckpointKind::Merge: return "manual";
    }
    return "manual";
}

std::string clamp_title(std::string_view title) {
    if (title.size() <= kMaxTitleChars)
        return std::string(title);
    std::size_t cut = kMaxTitleChars - 3;
    while (cut > 0 && (static_cast<unsigned char>(title[cut]) & 0xC0) == 0x80)
        --cut;
    return std::string(title.substr(0, cut)) + "...";
}

DevGraph DevGraph::with_origin(Checkpoint origin) {
    if (origin.kind != CheckpointKind::Origin || !origin.parents.empty())
        throw Error(ErrorCode::Validation, "graph root must be a parentless Origin checkpoint");
    DevGraph g;
    g.origin_ = origin.id;
    g.active_ = origin.id;
    g.nodes_.emplace(origin.id, std::move(origin));
    return g;
}

DevGraph DevGraph::from_parts(std::map<CheckpointId, Checkpoint> checkpoints, CheckpointId active) {
    DevGraph g;
    g.nodes_ = std::move(checkpoints);
    g.active_ = std::move(active);
    for (const auto& [id, cp] : g.nodes_)
        if (cp.kind == CheckpointKind::Origin)
            g.origin_ = id;
    g.validate();
    return g;
}

const Checkpoint* DevGraph::find(const CheckpointId& id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

const Checkpoint& DevGraph::at(const CheckpointId& id) const {
    if (auto* cp = find(id))
        return *cp;
    throw Error(ErrorCode::NotFound, "unknown checkpoint", id.str());
}

const Checkpoint& DevGraph::add(Checkpoint cp) {
    if (empty())
        throw Error(ErrorCode::Integrity, "graph has no Origin yet");
    if (cp.kind == CheckpointKind::Origin)
        throw Error(ErrorCode::Validation, "a graph has exactly one Origin checkpoint");
    if (cp.id.empty() || nodes_.contains(cp.id))
        throw Error(ErrorCode::Integrity, "checkpoint id missing or already used", cp.id.str());
    auto max_parents = cp.kind == CheckpointKind::Merge ? 2u : 1u;
    if (cp.parents.empty() || cp.parents.size() > max_parents)
        throw Error(ErrorCode::Integrity, "wrong number of parents", std::string(to_string(cp.kind)));
    if (cp.parents.size() == 2 && cp.parents[0] == cp.parents[1])
        throw Error(ErrorCode::Integrity, "merge parents must differ");
    for (const auto& p : cp.parents) {
        const auto& parent = at(p);
        cp.created_at = std::max(cp.created_at, parent.created_at);
    }
    auto id = cp.id;
    auto& stored = nodes_.emplace(id, std::move(cp)).first->second;
    active_ = id;
    return stored;
}

void DevGraph::set_active(const CheckpointId& id) {
    at(id);
    active_ = id;
}

GraphDelta DevGraph::remove(const CheckpointId& id) {
    const auto& node = at(id);
    if (node.kind == CheckpointKind::Origin)
        throw Error(ErrorCode::Forbidden, "the Origin checkpoint cannot be deleted");
    GraphDelta delta{id, {}, node.parents.front(), false};
    for (auto& [cid, child] : nodes_) {
        bool touched = false;
        for (auto& p : child.parents) {
            if (p == id) {
                p = delta.new_parent;
                touched = true;
            }
        }
        if (!touched)
            continue;
        if (child.parents.size() == 2 && child.parents[0] == child.parents[1])
            child.parents.pop_back();
        delta.reattached.push_back(cid);
    }
    nodes_.erase(id);
    if (active_ == id) {
        active_ = delta.new_parent;
        delta.active_moved = true;
    }
    return delta;
}

const Checkpoint& DevGraph::edit_metadata(const CheckpointId& id, const std::optional<std::string>& title,
                                          const std::optional<std::string>& description) {
    if (!title && !description)
        throw Error(ErrorCode::Validation, "nothing to edit: provide a title or a description");
    auto it = nodes_.find(id);
    if (it == nodes_.end())
        throw Error(ErrorCode::NotFound, "unknown checkpoint", id.str());
    if (title) {
        if (title->find_first_not_of(" \t\r\n") == std::string::npos)
            throw Error(ErrorCode::Validation, "title must not be empty");
        if (title->size() > kMaxTitleChars)
            throw Error(ErrorCode::Validation, "title is longer than 60 characters");
    }
    if (title)
        it->second.title = *title;
    if (description)
        it->second.description = *description;
    return it->second;
}

std::vector<CheckpointId> DevGraph::children(const CheckpointId& id) const {
    std::vector<CheckpointId> out;
    for (const auto& [cid, cp] : nodes_)
        if (std::find(cp.parents.begin(), cp.parents.end(), id) != cp.parents.end())
            out.push_back(cid);
    return out;
}

std::set<CheckpointId> DevGraph::ancestors(const CheckpointId& id) const {
    std::set<CheckpointId> seen;
    std::vector<CheckpointId> stack{id};
    at(id);
    while (!stack.empty()) {
        auto cur = std::move(stack.back());
        stack.pop_back();
        if (!seen.insert(cur).second)
            continue;
        for (const auto& p : at(cur).parents)
            stack.push_back(p);
    }
    return seen;
}

CheckpointId DevGraph::lowest_common_ancestor(const CheckpointId& a, const CheckpointId& b) const {
    auto anc_a = ancestors(a);
    auto anc_b = ancestors(b);
    std::set<CheckpointId> common;
    std::set_intersection(anc_a.begin(), anc_a.end(), anc_b.begin(), anc_b.end(),
                          std::inserter(common, common.end()));
    // Every proper ancestor of a common ancestor is itself common, so the
    // non-maximal elements are exactly the parents of common elements.
    std::set<CheckpointId> dominated;
    for (const auto& c : common)
        for (const auto& p : at(c).parents)
            dominated.insert(p);

    const Checkpoint* best = nullptr;
    for (const auto& c : common) {
        if (dominated.contains(c))
            continue;
        const auto& cp = at(c);
        if (!best || std::tie(cp.created_at, cp.id) > std::tie(best->created_at, best->id))
            best = &cp;
    }
    if (!best)
        throw Error(ErrorCode::Integrity, "checkpoints share no ancestor", a.str() + ", " + b.str());
    return best->id;
}

std::vector<CheckpointId> DevGraph::topological_order() const {
    using Key = std::tuple<Timestamp, CheckpointId>;
    std::map<CheckpointId, std::size_t> pending;
    std::map<CheckpointId, std::vector<CheckpointId>> kids;
    for (const auto& [id, cp] : nodes_) {
        pending[id] = 0;
        for (const auto& p : cp.parents) {
            if (!nodes_.contains(p))
                continue;
            ++pending[id];
            kids[p].push_back(id);
        }
    }
    std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
    for (const auto& [id, n] : pending)
        if (n == 0)
            ready.emplace(at(id).created_at, id);
    std::vector<CheckpointId> order;
    order.reserve(nodes_.size());
    while (!ready.empty()) {
        auto id = std::get<1>(ready.top());
        ready.pop();
        for (const auto& k : kids[id])
            if (--pending[k] == 0)
                ready.emplace(at(k).created_at, k);
        order.push_back(std::move(id));
    }
    return order;
}

void DevGraph::validate() const {
    if (nodes_.empty())
        throw Error(ErrorCode::Integrity, "graph is empty");
    std::size_t origins = 0;
    for (const auto& [id, cp] : nodes_) {
        if (cp.id != id)
            throw Error(ErrorCode::Integrity, "checkpoint stored under a different id", id.str());
        if (cp.kind == CheckpointKind::Origin) {
            ++origins;
            if (!cp.parents.empty())
                throw Error(ErrorCode::Integrity, "Origin must have no parents", id.str());
            continue;
        }
        auto max_parents = cp.kind == CheckpointKind::Merge ? 2u : 1u;
        if (cp.parents.empty() || cp.parents.size() > max_parents)
            throw Error(ErrorCode::Integrity, "wrong number of parents", id.str());
        if (cp.parents.size() == 2 && cp.parents[0] == cp.parents[1])
            throw Error(ErrorCode::Integrity, "duplicate parent", id.str());
        for (const auto& p : cp.parents) {
            auto* parent = find(p);
            if (!parent)
                throw Error(ErrorCode::Integrity, "dangling parent reference", id.str() + " -> " + p.str());
            if (parent->created_at > cp.created_at)
                throw Error(ErrorCode::Integrity, "parent is newer than child", id.str());
        }
    }
    if (origins != 1 || !find(origin_) || at(origin_).kind != CheckpointKind::Origin)
        throw Error(ErrorCode::Integrity, "graph must contain exactly one Origin");
    if (!find(active_))
        throw Error(ErrorCode::Integrity, "active checkpoint does not resolve", active_.str());
    if (topological_order().size() != nodes_.size())
        throw Error(ErrorCode::Integrity, "graph contains a cycle");

    // Forward reachability from Origin.
    std::map<CheckpointId, std::vector<CheckpointId>> kids;
    for (const auto& [id, cp] : nodes_)
        for (const auto& p : cp.parents)
            kids[p].push_back(id);
    std::set<CheckpointId> seen;
    std::vector<CheckpointId> stack{origin_};
    while (!stack.empty()) {
        auto cur = stack.back();
        stack.pop_back();
        if (!seen.insert(cur).second)
            continue;
        for (const auto& k : kids[cur])
            stack.push_back(k);
    }
    if (seen.size() != nodes_.size())
        throw Error(ErrorCode::Integrity, "some checkpoints are unreachable from Origin");
}

} // namespace evograph
