#pragma once

#include "evograph/core.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evograph {

enum class Role { User, Assistant, System };

std::string_view to_string(Role role);
Role parse_role(std::string_view text);

struct CodeBlock {
    std::string block_id;
    std::string language;
    // From the fence info string `path=<relative path>`; empty means the block
    // is display-only.
    std::string target_path;
    std::string body;

    bool applicable() const noexcept { return !target_path.empty(); }

    friend bool operator==(const CodeBlock&, const CodeBlock&) = default;
};

// Fenced blocks in order, with ids "b1", "b2", ...
std::vector<CodeBlock> parse_code_blocks(std::string_view text);

struct ChatMessage {
    MessageId id;
    Role role = Role::User;
    std::string text;
    std::vector<CodeBlock> code_blocks;
    Timestamp created_at{};

    const CodeBlock* find_block(std::string_view block_id) const;

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

// Immutable once stored; evolutions get a new id (copy then extend).
struct ChatSession {
    ChatId id;
    std::vector<ChatMessage> messages;

    const ChatMessage* find(const MessageId& id) const;
    bool contains(const MessageId& id) const { return find(id) != nullptr; }

    friend bool operator==(const ChatSession&, const ChatSession&) = default;
};

class ChatStore {
public:
    const ChatSession& at(const ChatId& id) const;
    const ChatSession* find(const ChatId& id) const;
    bool contains(const ChatId& id) const { return sessions_.contains(id); }
    // Rejects an id that is already stored.
    const ChatSession& insert(ChatSession session);
    bool erase(const ChatId& id) { return sessions_.erase(id) > 0; }

    const std::map<ChatId, ChatSession>& sessions() const noexcept { return sessions_; }

    friend bool operator==(const ChatStore&, const ChatStore&) = default;

private:
    std::map<ChatId, ChatSession> sessions_;
};

// Messages of `session` whose ids are absent from `reference`.
std::vector<ChatMessage> messages_not_in(const ChatSession& session, const ChatSession& reference);

} // namespace evograph
