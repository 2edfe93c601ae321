#pragma once

#include "evograph/chat.hpp"
#include "evograph/history_graph.hpp"
#include "evograph/merge.hpp"
#include "evograph/workspace_diff.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace evograph {

enum class Duty { Chat, ApplyEdit, TitleDescription, MergeFiles, SummarizeConversation };

std::string_view to_string(Duty duty);

struct ChatReply {
    std::string text;
    std::vector<CodeBlock> code_blocks;
};

struct TitleDescription {
    std::string title;
    std::string description;

    friend bool operator==(const TitleDescription&, const TitleDescription&) = default;
};

// Prompt checkpoints are titled from the exchange, not from a code diff.
struct PromptExchange {
    std::string prompt;
    std::string response;
};

struct MergeFilesRequest {
    std::string path;
    std::string base;
    std::vector<DiffHunk> ours_diff;
    std::vector<DiffHunk> theirs_diff;
    std::vector<ConflictRegion> conflicts;
};

// Boundary to the language model. Every model duty is one call; none of them
// touch the workspace or the graph. Implementations override the private
// do_* hooks; the public calls check pre- and postconditions.
class AssistantGateway {
public:
    virtual ~AssistantGateway() = default;

    // messages must be non-empty and end with a user message.
    ChatReply complete_chat(std::span<const ChatMessage> messages, const std::optional<std::string>& context);

    // Non-empty title of at most 60 characters.
    TitleDescription title_description(const WorkspaceDiff& parent_diff, CheckpointKind kind,
                                       const PromptExchange* exchange = nullptr);

    // Complete replacement content for block.target_path.
    std::string apply_edit(const CodeBlock& block, std::string_view current);

    // Complete merged file; requires at least one conflict.
    std::string merge_files(const MergeFilesRequest& request);

    std::string summarize_conversation(std::span<const ChatMessage> messages);

    virtual std::string_view name() const = 0;

private:
    virtual std::string do_complete_chat(std::span<const ChatMessage> messages,
                                         const std::optional<std::string>& context) = 0;
    virtual TitleDescription do_title_description(const WorkspaceDiff& parent_diff, CheckpointKind kind,
                                                  const PromptExchange* exchange) = 0;
    virtual std::string do_apply_edit(const CodeBlock& block, std::string_view current) = 0;
    virtual std::string do_merge_files(const MergeFilesRequest& request) = 0;
    virtual std::string do_summarize_conversation(std::span<const ChatMessage> messages) = 0;
};

// Used when the gateway fails: "Edited N file(s): <paths>".
TitleDescription fallback_title_description(const WorkspaceDiff& parent_diff);

// Deterministic offline assistant. Recognized prompt directives:
//   "add a section about <Topic>"     appends a `## <Topic>` section (README.md,
//                                     or the file named after " to ")
//   "write <path>: <text>"            replaces <path> with <text>
//   "append to <path>: <text>"        appends <text> to <path>
// With a graph context document, the reply also walks the listed checkpoints.
class MockGateway final : public AssistantGateway {
public:
    std::string_view name() const override { return "mock"; }

private:
    std::string do_complete_chat(std::span<const ChatMessage> messages,
                                 const std::optional<std::string>& context) override;
    TitleDescription do_title_description(const WorkspaceDiff& parent_diff, CheckpointKind kind,
                                          const PromptExchange* exchange) override;
    std::string do_apply_edit(const CodeBlock& block, std::string_view current) override;
    std::string do_merge_files(const MergeFilesRequest& request) override;
    std::string do_summarize_conversation(std::span<const ChatMessage> messages) override;
};

inline constexpr std::string_view kFullFileSentinel = "<FULL-FILE>";

// Remote chat-completion adapter when EVOGRAPH_LLM_ENDPOINT is set, the mock
// otherwise.
std::unique_ptr<AssistantGateway> make_gateway_from_env();

} // namespace evograph
