#include "evograph/workspace.hpp"
#include "evograph/error.hpp"

#include <random>

namespace evograph {

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::GraphChanged: return "GraphChanged";
    case EventKind::ActiveChanged: return "ActiveChanged";
    case EventKind::ChatAppended: return "ChatAppended";
    case EventKind::ReviewModeToggled: return "ReviewModeToggled";
    }
    return "?";
}

namespace {

std::uint64_t pick_seed(std::uint64_t seed) {
    if (seed != 0)
        return seed;
    std::random_device rd;
    return (std::uint64_t{rd()} << 32) ^ rd();
}

} // namespace

Workspace::Workspace(fs::path root, AssistantGateway& gateway, SessionState state, EngineOptions options)
    : root_(std::move(root)),
      gateway_(&gateway),
      store_(root_ / kSessionDirName),
      state_(std::move(state)),
      clock_(options.clock),
      ids_(options.clock, pick_seed(options.id_seed)) {
    // Ids keep sorting in creation order across reopened sessions.
    for (const auto& [id, cp] : state_.graph.checkpoints())
        ids_.observe(id.str());
    for (const auto& [id, session] : state_.chats.sessions()) {
        ids_.observe(id.str());
        for (const auto& m : session.messages)
            ids_.observe(m.id.str());
    }
}

Workspace Workspace::init(const fs::path& root, AssistantGateway& gateway, EngineOptions options) {
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw Error(ErrorCode::NotFound, "workspace directory does not exist", root.string());
    auto dir = root / kSessionDirName;
    if (fs::exists(dir / kSessionFileName, ec))
        throw Error(ErrorCode::AlreadyInitialized, "session already initialized", dir.string());
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::Io, "cannot create session directory", dir.string() + ": " + ec.message());
    // Keeps the session out of the user's own version control.
    write_file_bytes(dir / ".gitignore", "*\n");

    SessionState state;
    if (options.rules)
        state.settings.ignore = *options.rules;
    Workspace ws(root, gateway, std::move(state), std::move(options));

    auto snap = ws.capture();
    ChatSession chat{ChatId{ws.next_id()}, {}};
    Checkpoint origin;
    origin.id = CheckpointId{ws.next_id()};
    origin.kind = CheckpointKind::Origin;
    origin.snapshot = snap.id;
    origin.chat = chat.id;
    origin.title = "Origin";
    origin.description = "Workspace state when the session started.";
    origin.created_at = ws.now();
    ws.state_.chats.insert(std::move(chat));
    ws.state_.graph = DevGraph::with_origin(std::move(origin));
    ws.commit({{EventKind::GraphChanged, {ws.graph().origin().str()}}});
    return ws;
}

Workspace Workspace::open(const fs::path& root, AssistantGateway& gateway, EngineOptions options) {
    auto dir = root / kSessionDirName;
    SnapshotStore store(dir);
    auto state = load_session(dir, &store);
    return Workspace(root, gateway, std::move(state), std::move(options));
}

std::string Workspace::next_id() { return ids_.next(); }

Snapshot Workspace::capture() {
    auto result = store_.capture(root_, state_.settings.ignore);
    return remember(result.snapshot);
}

const Snapshot& Workspace::remember(const Snapshot& snap) {
    state_.snapshots.try_emplace(snap.id, now());
    return snap;
}

TitleDescription Workspace::describe(const WorkspaceDiff& diff, CheckpointKind kind, const PromptExchange* exchange) {
    try {
        return gateway_->title_description(diff, kind, exchange);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Gateway)
            throw;
    }
    if (exchange) {
        auto line = exchange->prompt.substr(0, exchange->prompt.find('\n'));
        return {clamp_title(line), exchange->prompt};
    }
    return fallback_title_description(diff);
}

void Workspace::commit(std::vector<EngineEvent> events) {
    save_session(state_, session_dir());
    if (listener_)
        for (const auto& e : events)
            listener_(e);
}

CheckpointId resolve_checkpoint(const DevGraph& graph, std::string_view id_or_prefix) {
    if (id_or_prefix.empty())
        throw Error(ErrorCode::Validation, "checkpoint id is empty");
    if (id_or_prefix == "origin")
        return graph.origin();
    if (id_or_prefix == "active")
        return graph.active();
    CheckpointId exact{std::string(id_or_prefix)};
    if (graph.contains(exact))
        return exact;
    std::vector<CheckpointId> hits;
    for (const auto& [id, cp] : graph.checkpoints())
        if (id.str().starts_with(id_or_prefix))
            hits.push_back(id);
    if (hits.empty())
        throw Error(ErrorCode::NotFound, "no such checkpoint", std::string(id_or_prefix));
    if (hits.size() > 1)
        throw Error(ErrorCode::Validation, "checkpoint id prefix is ambiguous", std::string(id_or_prefix));
    return hits.front();
}

const Checkpoint& Workspace::checkpoint_manual(const std::optional<std::string>& title,
                                               const std::optional<std::string>& description) {
    if (title && title->find_first_not_of(" \t\r\n") == std::string::npos)
        throw Error(ErrorCode::Validation, "title must not be empty");
    if (title && title->size() > kMaxTitleChars)
        throw Error(ErrorCode::Validation, "title is longer than 60 characters");
    const auto& parent = state_.graph.active_checkpoint();
    auto parent_snap = store_.load(parent.snapshot);
    auto snapshots_before = state_.snapshots;
    auto snap = capture();
    if (snap.id == parent.snapshot) {
        state_.snapshots = std::move(snapshots_before);
        throw Error(ErrorCode::Validation, "no changes since the active checkpoint", parent.id.str());
    }
    TitleDescription td;
    if (!title || !description)
        td = describe(workspace_diff(store_, parent_snap, snap), CheckpointKind::ManualChange);
    Checkpoint cp;
    cp.id = CheckpointId{next_id()};
    cp.kind = CheckpointKind::ManualChange;
    cp.parents = {parent.id};
    cp.snapshot = snap.id;
    cp.chat = parent.chat;
    cp.title = title ? *title : td.title;
    cp.description = description ? *description : td.description;
    cp.created_at = now();
    const auto& added = state_.graph.add(std::move(cp));
    commit({{EventKind::GraphChanged, {added.id.str()}}, {EventKind::ActiveChanged, {added.id.str()}}});
    return state_.graph.at(added.id);
}

RestoreReport Workspace::switch_to(const CheckpointId& id) {
    const auto& target = state_.graph.at(id);
    auto report = store_.restore(store_.load(target.snapshot), root_, state_.settings.ignore);
    if (id == state_.graph.active())
        return report;
    state_.graph.set_active(id);
    commit({{EventKind::ActiveChanged, {id.str()}}});
    return report;
}

GraphDelta Workspace::delete_checkpoint(const CheckpointId& target) {
    auto id = target;
    const auto& cp = state_.graph.at(id);
    if (cp.kind == CheckpointKind::Origin)
        throw Error(ErrorCode::Forbidden, "the Origin checkpoint cannot be deleted", id.str());
    if (id == state_.graph.active()) {
        const auto& parent = state_.graph.at(*cp.primary_parent());
        store_.restore(store_.load(parent.snapshot), root_, state_.settings.ignore);
    }
    auto delta = state_.graph.remove(id);
    std::vector<EngineEvent> events{{EventKind::GraphChanged, {id.str()}}};
    if (delta.active_moved)
        events.push_back({EventKind::ActiveChanged, {state_.graph.active().str()}});
    commit(std::move(events));
    return delta;
}

const Checkpoint& Workspace::edit_metadata(const CheckpointId& id, const std::optional<std::string>& title,
                                           const std::optional<std::string>& description) {
    state_.graph.edit_metadata(id, title, description);
    commit({{EventKind::GraphChanged, {id.str()}}});
    return state_.graph.at(id);
}

std::size_t Workspace::collect_garbage() {
    std::set<SnapshotId> live;
    for (const auto& [id, cp] : state_.graph.checkpoints())
        live.insert(cp.snapshot);
    std::erase_if(state_.snapshots, [&](const auto& entry) { return !live.contains(entry.first); });
    save_session(state_, session_dir());
    return store_.collect_garbage(live);
}

} // namespace evograph
