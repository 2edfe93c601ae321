#include "evograph/chat.hpp"
#include "evograph/error.hpp"
#include "evograph/snapshot_store.hpp"

namespace evograph {

std::string_view to_string(Role role) {
    switch (role) {
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
    case Role::System: return "system";
    }
    return "?";
}

Role parse_role(std::string_view text) {
    for (auto r : {Role::User, Role::Assistant, Role::System})
        if (to_string(r) == text)
            return r;
    throw Error(ErrorCode::Parse, "unknown chat role", std::string(text));
}

namespace {

std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Fence info string: first bare word is the language, `path=<p>` or
// `path="<p with spaces>"` the target.
void parse_info(std::string_view info, CodeBlock& block) {
    std::size_t pos = 0;
    while (pos < info.size()) {
        pos = info.find_first_not_of(" \t", pos);
        if (pos == std::string_view::npos)
            break;
        std::string token;
        bool quoted = false;
        while (pos < info.size() && (quoted || (info[pos] != ' ' && info[pos] != '\t'))) {
            if (info[pos] == '"')
                quoted = !quoted;
            else
                token.push_back(info[pos]);
            ++pos;
        }
        if (token.starts_with("path=")) {
            auto p = token.substr(5);
            if (is_normalized_relative_path(p))
                block.target_path = p;
        } else if (block.language.empty() && token.find('=') == std::string::npos) {
            block.language = token;
        }
    }
}

} // namespace

std::vector<CodeBlock> parse_code_blocks(std::string_view text) {
    std::vector<CodeBlock> blocks;
    std::size_t pos = 0;
    std::optional<CodeBlock> open;
    std::size_t fence_len = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        auto t = trim(line);
        if (!open) {
            if (!t.starts_with("```"))
                continue;
            fence_len = t.find_first_not_of('`');
            if (fence_len == std::string_view::npos)
                fence_len = t.size();
            open.emplace();
            parse_info(t.substr(fence_len), *open);
            continue;
        }
        if (t.size() >= fence_len && t.find_first_not_of('`') == std::string_view::npos) {
            open->block_id = "b" + std::to_string(blocks.size() + 1);
            blocks.push_back(std::move(*open));
            open.reset();
            continue;
        }
        open->body.append(line);
        open->body.push_back('\n');
    }
    // An unterminated fence is not a block.
    return blocks;
}

const CodeBlock* ChatMessage::find_block(std::string_view block_id) const {
    for (const auto& b : code_blocks)
        if (b.block_id == block_id)
            return &b;
    return nullptr;
}

const ChatMessage* ChatSession::find(const MessageId& id) const {
    for (const auto& m : messages)
        if (m.id == id)
            return &m;
    return nullptr;
}

const ChatSession& ChatStore::at(const ChatId& id) const {
    if (auto* s = find(id))
        return *s;
    throw Error(ErrorCode::NotFound, "unknown chat session", id.str());
}

const ChatSession* ChatStore::find(const ChatId& id) const {
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : &it->second;
}

const ChatSession& ChatStore::insert(ChatSession session) {
    if (session.id.empty() || sessions_.contains(session.id))
        throw Error(ErrorCode::Integrity, "chat session id missing or already used", session.id.str());
    auto id = session.id;
    return sessions_.emplace(std::move(id), std::move(session)).first->second;
}

std::vector<ChatMessage> messages_not_in(const ChatSession& session, const ChatSession& reference) {
    std::vector<ChatMessage> out;
    for (const auto& m : session.messages)
        if (!reference.contains(m.id))
            out.push_back(m);
    return out;
}

} // namespace evograph
