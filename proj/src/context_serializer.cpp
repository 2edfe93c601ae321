#include "evograph/context_serializer.hpp"
#include "evograph/error.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace evograph {

namespace {

constexpr std::size_t kMaxDescriptionChars = 200;

std::string one_line(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '\r')
            continue;
        if (c == '\n') {
            if (!out.empty() && out.back() != ' ')
                out += " / ";
            continue;
        }
        out.push_back(c);
    }
    while (!out.empty() && (out.back() == ' ' || out.back() == '/'))
        out.pop_back();
    if (out.size() > kMaxDescriptionChars) {
        auto cut = kMaxDescriptionChars - 3;
        while (cut > 0 && (static_cast<unsigned char>(out[cut]) & 0xC0) == 0x80)
            --cut;
        out = out.substr(0, cut) + "...";
    }
    return out;
}

std::map<CheckpointId, std::size_t> distances_from(const DevGraph& graph, const CheckpointId& start) {
    std::map<CheckpointId, std::vector<CheckpointId>> adjacent;
    for (const auto& [id, cp] : graph.checkpoints()) {
        for (const auto& p : cp.parents) {
            adjacent[id].push_back(p);
            adjacent[p].push_back(id);
        }
    }
    std::map<CheckpointId, std::size_t> dist{{start, 0}};
    std::deque<CheckpointId> queue{start};
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        for (const auto& n : adjacent[cur]) {
            if (dist.emplace(n, dist[cur] + 1).second)
                queue.push_back(n);
        }
    }
    return dist;
}

} // namespace

ContextDocument serialize_graph(const DevGraph& graph, std::size_t budget_chars) {
    if (budget_chars < kMinContextBudget)
        throw Error(ErrorCode::Validation, "context budget must be at least 500 characters",
                    std::to_string(budget_chars));
    if (graph.empty())
        throw Error(ErrorCode::Integrity, "graph is not initialized");

    const auto& active = graph.active();
    const auto order = graph.topological_order();
    const auto protected_nodes = graph.ancestors(active);
    auto dist = distances_from(graph, active);

    struct Entry {
        std::string node_line;
        std::string desc_line;
        bool included = true;
        bool has_desc = true;
    };
    std::map<CheckpointId, Entry> entries;
    for (const auto& id : order) {
        const auto& cp = graph.at(id);
        Entry e;
        e.node_line = "  NODE " + id.str() + " [" + std::string(to_string(cp.kind)) + "] " +
                      (id == active ? "(active) " : "") + cp.title + "\n";
        auto desc = one_line(cp.description);
        e.has_desc = !desc.empty();
        if (e.has_desc)
            e.desc_line = "    " + desc + "\n";
        entries.emplace(id, std::move(e));
    }
    std::vector<std::pair<CheckpointId, CheckpointId>> edges;
    for (const auto& id : order)
        for (const auto& p : graph.at(id).parents)
            edges.emplace_back(p, id);
    auto edge_line = [](const CheckpointId& from, const CheckpointId& to) {
        return "  EDGE " + from.str() + " -> " + to.str() + "\n";
    };

    std::size_t omitted = 0;
    bool truncated = false;
    auto header = [&] {
        std::string h = std::string(kContextHeader) + "\nactive: " + active.str() + "\ntruncated: " +
                        (truncated ? "yes" : "no") + "\n";
        if (omitted > 0)
            h += "omitted: " + std::to_string(omitted) + " checkpoint(s)\n";
        return h + "nodes:\n";
    };
    std::size_t body = std::string_view("edges:\n").size();
    for (const auto& [id, e] : entries)
        body += e.node_line.size() + e.desc_line.size();
    for (const auto& [from, to] : edges)
        body += edge_line(from, to).size();
    auto size = [&] { return header().size() + body; };

    // Farthest first; ties: older first, then smaller id.
    std::vector<CheckpointId> elision(order.begin(), order.end());
    std::stable_sort(elision.begin(), elision.end(), [&](const CheckpointId& a, const CheckpointId& b) {
        return std::make_tuple(dist[b], graph.at(a).created_at, a) < std::make_tuple(dist[a], graph.at(b).created_at, b);
    });

    if (size() > budget_chars) {
        truncated = true;
        for (const auto& id : elision) {
            if (size() <= budget_chars)
                break;
            auto& e = entries.at(id);
            if (!e.has_desc)
                continue;
            body -= e.desc_line.size();
            e.has_desc = false;
        }
        for (const auto& id : elision) {
            if (size() <= budget_chars)
                break;
            if (protected_nodes.contains(id))
                continue;
            auto& e = entries.at(id);
            e.included = false;
            ++omitted;
            body -= e.node_line.size();
            for (const auto& [from, to] : edges) {
                if (from != id && to != id)
                    continue;
                // An edge is counted until its first endpoint goes.
                const auto& other = from == id ? to : from;
                if (entries.at(other).included)
                    body -= edge_line(from, to).size();
            }
        }
    }

    ContextDocument doc;
    doc.truncated = truncated;
    doc.text = header();
    for (const auto& id : order) {
        const auto& e = entries.at(id);
        if (!e.included)
            continue;
        doc.included_nodes.push_back(id);
        doc.text += e.node_line;
        if (e.has_desc)
            doc.text += e.desc_line;
    }
    doc.text += "edges:\n";
    for (const auto& [from, to] : edges)
        if (entries.at(from).included && entries.at(to).included)
            doc.text += edge_line(from, to);
    return doc;
}

} // namespace evograph
