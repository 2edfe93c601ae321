#include "evograph/context_serializer.hpp"
#include "evograph/error.hpp"
#include "evograph/workspace.hpp"

namespace evograph {

PromptResult Workspace::send_prompt(std::string_view text, bool include_graph) {
    const auto& active = state_.graph.active_checkpoint();
    return prompt_from(active.id, state_.chats.at(active.chat).messages, text, include_graph);
}

PromptResult Workspace::edit_prompt(const CheckpointId& source, const MessageId& message, std::string_view new_text,
                                    bool include_graph) {
    const auto& src = state_.graph.at(source);
    const auto& session = state_.chats.at(src.chat);
    const auto* original = session.find(message);
    if (!original)
        throw Error(ErrorCode::NotFound, "message is not part of the checkpoint's chat", message.str());
    if (original->role != Role::User)
        throw Error(ErrorCode::Validation, "only user prompts can be edited", message.str());

    // Walk back to the checkpoint whose chat first contained the message.
    const Checkpoint* introducing = &src;
    while (const auto* parent = introducing->primary_parent()) {
        const auto& p = state_.graph.at(*parent);
        if (!state_.chats.at(p.chat).contains(message))
            break;
        introducing = &p;
    }
    if (!introducing->primary_parent())
        throw Error(ErrorCode::Integrity, "message has no introducing checkpoint", message.str());

    std::vector<ChatMessage> prefix;
    for (const auto& m : session.messages) {
        if (m.id == message)
            break;
        prefix.push_back(m);
    }
    return prompt_from(*introducing->primary_parent(), std::move(prefix), new_text, include_graph);
}

PromptResult Workspace::prompt_from(const CheckpointId& parent_id, std::vector<ChatMessage> prefix,
                                    std::string_view text, bool include_graph) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw Error(ErrorCode::Validation, "prompt text must not be empty");

    ChatMessage user;
    user.id = MessageId{next_id()};
    user.role = Role::User;
    user.text = std::string(text);
    user.created_at = now();
    prefix.push_back(user);

    std::optional<std::string> context;
    if (include_graph)
        context = serialize_graph(state_.graph, state_.settings.context_budget).text;
    auto reply = gateway_->complete_chat(prefix, context);

    ChatMessage assistant;
    assistant.id = MessageId{next_id()};
    assistant.role = Role::Assistant;
    assistant.text = reply.text;
    assistant.code_blocks = reply.code_blocks;
    assistant.created_at = now();
    prefix.push_back(assistant);

    PromptExchange exchange{user.text, assistant.text};
    auto td = describe(WorkspaceDiff{}, CheckpointKind::AiPrompt, &exchange);

    const auto& parent = state_.graph.at(parent_id);
    std::vector<EngineEvent> events;
    if (parent_id != state_.graph.active()) {
        store_.restore(store_.load(parent.snapshot), root_, state_.settings.ignore);
        state_.graph.set_active(parent_id);
        events.push_back({EventKind::ActiveChanged, {parent_id.str()}});
    }

    ChatSession session{ChatId{next_id()}, std::move(prefix)};
    Checkpoint cp;
    cp.id = CheckpointId{next_id()};
    cp.kind = CheckpointKind::AiPrompt;
    cp.parents = {parent_id};
    // Prompting changes no files.
    cp.snapshot = parent.snapshot;
    cp.chat = session.id;
    cp.title = td.title;
    cp.description = td.description;
    cp.created_at = now();
    state_.chats.insert(std::move(session));
    const auto& added = state_.graph.add(std::move(cp));

    events.push_back({EventKind::ChatAppended, {added.chat.str(), user.id.str(), assistant.id.str()}});
    events.push_back({EventKind::GraphChanged, {added.id.str()}});
    events.push_back({EventKind::ActiveChanged, {added.id.str()}});
    PromptResult result{added.id, user.id, assistant.id};
    commit(std::move(events));
    return result;
}

const Checkpoint& Workspace::apply_code_block(const MessageId& message, std::string_view block_id) {
    const auto& active = state_.graph.active_checkpoint();
    const auto* msg = state_.chats.at(active.chat).find(message);
    if (!msg)
        throw Error(ErrorCode::NotFound, "message is not part of the active chat", message.str());
    const auto* block = msg->find_block(block_id);
    if (!block)
        throw Error(ErrorCode::NotFound, "no such code block in the message", std::string(block_id));
    if (!block->applicable())
        throw Error(ErrorCode::Validation, "code block names no target file", std::string(block_id));
    if (state_.settings.ignore.ignores_path(block->target_path))
        throw Error(ErrorCode::Validation, "code block targets an ignored path", block->target_path);

    AppliedBlock applied{message, std::string(block_id)};
    for (const auto& id : state_.graph.ancestors(active.id)) {
        const auto& cp = state_.graph.at(id);
        if (cp.kind == CheckpointKind::AiCodeApplied && cp.applied == applied)
            throw Error(ErrorCode::Validation, "code block is already applied on this branch", cp.id.str());
    }

    // The edit works on the checkpointed content, not on unsaved disk edits.
    auto parent_snap = store_.load(active.snapshot);
    auto current = store_.read_file(parent_snap, block->target_path).value_or("");
    auto updated = gateway_->apply_edit(*block, current);
    if (updated == current && parent_snap.entries.contains(block->target_path))
        throw Error(ErrorCode::Validation, "applying the block changes nothing", block->target_path);
    if (updated.size() > state_.settings.ignore.max_file_bytes)
        throw Error(ErrorCode::Validation, "edited file exceeds the size limit", block->target_path);

    auto entries = parent_snap.entries;
    entries[block->target_path] = store_.blobs().put(updated);
    auto snap = store_.make_snapshot(std::move(entries));
    auto target = root_ / block->target_path;
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    write_file_bytes(target, updated);
    remember(snap);

    auto td = describe(workspace_diff(store_, parent_snap, snap), CheckpointKind::AiCodeApplied);
    Checkpoint cp;
    cp.id = CheckpointId{next_id()};
    cp.kind = CheckpointKind::AiCodeApplied;
    cp.parents = {active.id};
    cp.snapshot = snap.id;
    cp.chat = active.chat;
    cp.title = td.title;
    cp.description = td.description;
    cp.created_at = now();
    cp.applied = std::move(applied);
    const auto& added = state_.graph.add(std::move(cp));
    auto id = added.id;
    commit({{EventKind::GraphChanged, {id.str()}}, {EventKind::ActiveChanged, {id.str()}}});
    return state_.graph.at(id);
}

} // namespace evograph
