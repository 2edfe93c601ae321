#include "evograph/gateway.hpp"
#include "evograph/error.hpp"

namespace evograph {

std::string_view to_string(Duty duty) {
    switch (duty) {
    case Duty::Chat: return "chat";
    case Duty::ApplyEdit: return "apply_edit";
    case Duty::TitleDescription: return "title_description";
    case Duty::MergeFiles: return "merge_files";
    case Duty::SummarizeConversation: return "summarize_conversation";
    }
    return "?";
}

ChatReply AssistantGateway::complete_chat(std::span<const ChatMessage> messages,
                                          const std::optional<std::string>& context) {
    if (messages.empty() || messages.back().role != Role::User)
        throw Error(ErrorCode::Validation, "chat request must end with a user message");
    ChatReply reply;
    reply.text = do_complete_chat(messages, context);
    reply.code_blocks = parse_code_blocks(reply.text);
    return reply;
}

TitleDescription AssistantGateway::title_description(const WorkspaceDiff& parent_diff, CheckpointKind kind,
                                                     const PromptExchange* exchange) {
    auto td = do_title_description(parent_diff, kind, exchange);
    if (td.title.find_first_not_of(" \t\r\n") == std::string::npos)
        throw Error(ErrorCode::Gateway, "assistant returned an empty title");
    if (auto nl = td.title.find('\n'); nl != std::string::npos)
        td.title.resize(nl);
    td.title = clamp_title(td.title);
    return td;
}

std::string AssistantGateway::apply_edit(const CodeBlock& block, std::string_view current) {
    if (!block.applicable())
        throw Error(ErrorCode::Validation, "code block has no target path", block.block_id);
    return do_apply_edit(block, current);
}

std::string AssistantGateway::merge_files(const MergeFilesRequest& request) {
    if (request.conflicts.empty())
        throw Error(ErrorCode::Validation, "merge_files needs at least one conflict", request.path);
    return do_merge_files(request);
}

std::string AssistantGateway::summarize_conversation(std::span<const ChatMessage> messages) {
    return do_summarize_conversation(messages);
}

TitleDescription fallback_title_description(const WorkspaceDiff& parent_diff) {
    std::string paths;
    for (const auto& f : parent_diff.files) {
        if (!paths.empty())
            paths += ", ";
        paths += f.path;
    }
    auto text = "Edited " + std::to_string(parent_diff.files.size()) + " file(s): " + paths;
    return {clamp_title(text), text};
}

} // namespace evograph
