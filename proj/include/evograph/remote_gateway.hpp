#pragma once

#include "evograph/gateway.hpp"

#include <chrono>
#include <string>

namespace evograph {

struct RemoteGatewayConfig {
    // Full chat-completion URL, e.g. https://api.openai.com/v1/chat/completions
    std::string endpoint;
    std::string api_key;
    std::string model = "gpt-4o";
    std::chrono::seconds timeout{120};

    // EVOGRAPH_LLM_ENDPOINT, EVOGRAPH_LLM_KEY, EVOGRAPH_LLM_MODEL. nullopt when
    // no endpoint is configured.
    static std::optional<RemoteGatewayConfig> from_env();
};

// OpenAI-style JSON chat-completion client. Each duty renders its template
// from prompts/v1 into a system + user message pair.
class RemoteGateway final : public AssistantGateway {
public:
    explicit RemoteGateway(RemoteGatewayConfig config);

    std::string_view name() const override { return "remote"; }

    // The request body sent for a message list; exposed for wire-format tests.
    std::string request_body(const std::vector<std::pair<std::string, std::string>>& messages) const;

private:
    std::string do_complete_chat(std::span<const ChatMessage> messages,
                                 const std::optional<std::string>& context) override;
    TitleDescription do_title_description(const WorkspaceDiff& parent_diff, CheckpointKind kind,
                                          const PromptExchange* exchange) override;
    std::string do_apply_edit(const CodeBlock& block, std::string_view current) override;
    std::string do_merge_files(const MergeFilesRequest& request) override;
    std::string do_summarize_conversation(std::span<const ChatMessage> messages) override;

    std::string complete(const std::vector<std::pair<std::string, std::string>>& messages);

    RemoteGatewayConfig config_;
    std::string origin_;
    std::string path_;
};

// Drops a single fence wrapping the whole reply.
std::string strip_outer_fence(std::string_view text);

} // namespace evograph
