#include "evograph/compare.hpp"

namespace evograph {

std::string render_workspace_diff(const SnapshotStore& store, const Snapshot& a, const Snapshot& b) {
    auto diff = workspace_diff(store, a, b);
    std::string out;
    for (const auto& f : diff.files) {
        bool in_a = a.entries.contains(f.path);
        bool in_b = b.entries.contains(f.path);
        auto left = in_a ? "a/" + f.path : std::string("/dev/null");
        auto right = in_b ? "b/" + f.path : std::string("/dev/null");
        auto old_text = in_a ? store.read_blob(a.entries.at(f.path)) : std::string{};
        auto new_text = in_b ? store.read_blob(b.entries.at(f.path)) : std::string{};
        if (f.kind == FileChangeKind::OpaqueBinaryChanged || is_binary(old_text) || is_binary(new_text)) {
            out += "Binary files " + left + " and " + right + " differ\n";
            continue;
        }
        out += "--- " + left + "\n";
        out += "+++ " + right + "\n";
        out += unified_hunks(old_text, new_text);
    }
    return out;
}

namespace {

void render_message(std::string& out, char tag, const ChatMessage& m) {
    out.push_back(tag);
    out += " ";
    out += to_string(m.role);
    out += ":";
    std::size_t start = 0;
    bool first = true;
    while (start < m.text.size()) {
        auto nl = m.text.find('\n', start);
        auto line = std::string_view(m.text).substr(start, nl == std::string::npos ? std::string::npos : nl - start);
        out += first ? " " : "  ";
        out += line;
        out += "\n";
        first = false;
        if (nl == std::string::npos)
            break;
        start = nl + 1;
    }
    if (first)
        out += "\n";
}

} // namespace

CompareReport compare_checkpoints(const SessionState& state, const SnapshotStore& store, const CheckpointId& active,
                                  const CheckpointId& other) {
    const auto& a = state.graph.at(active);
    const auto& b = state.graph.at(other);
    auto snap_a = store.load(a.snapshot);
    auto snap_b = store.load(b.snapshot);
    const auto& chat_a = state.chats.at(a.chat);
    const auto& chat_b = state.chats.at(b.chat);

    CompareReport report;
    report.active = active;
    report.other = other;
    report.diff = workspace_diff(store, snap_a, snap_b);
    report.only_active = messages_not_in(chat_a, chat_b);
    report.only_other = messages_not_in(chat_b, chat_a);

    auto& out = report.rendered;
    out = "compare " + active.str() + " (active) with " + other.str() + "\n";
    auto code = render_workspace_diff(store, snap_a, snap_b);
    out += code.empty() ? "(no code changes)\n" : code;
    out += "--- chat ---\n";
    if (report.only_active.empty() && report.only_other.empty())
        out += "(no chat differences)\n";
    for (const auto& m : report.only_active)
        render_message(out, '-', m);
    for (const auto& m : report.only_other)
        render_message(out, '+', m);
    return report;
}

} // namespace evograph
