#include "evograph/error.hpp"
#include "evograph/gateway.hpp"
#include "evograph/line_diff.hpp"
#include "evograph/merge.hpp"

#include <gtest/gtest.h>

using namespace evograph;

namespace {

ChatMessage user(const std::string& text) { return {MessageId{"u" + text.substr(0, 3)}, Role::User, text, {}, {}}; }
ChatMessage assistant(const std::string& text) { return {MessageId{"a"}, Role::Assistant, text, {}, {}}; }

CodeBlock append_block(const std::string& body) { return {"b1", "markdown", "README.md", body}; }

FileChange added(const std::string& path, std::vector<std::string> lines) {
    return {FileChangeKind::Added, path, std::move(lines), {}};
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::Io;
}

} // namespace

TEST(MockChat, SectionDirectiveYieldsOneReadmeBlock) {
    MockGateway gw;
    std::vector<ChatMessage> msgs{user("add a section about Python to the README")};
    auto reply = gw.complete_chat(msgs, std::nullopt);
    ASSERT_EQ(reply.code_blocks.size(), 1u);
    EXPECT_EQ(reply.code_blocks[0].target_path, "README.md");
    EXPECT_TRUE(reply.code_blocks[0].body.starts_with("## Python\n"));
}

TEST(MockChat, SectionDirectiveWithExplicitFile) {
    MockGateway gw;
    std::vector<ChatMessage> msgs{user("Add a section about Setup to docs/guide.md please")};
    auto reply = gw.complete_chat(msgs, std::nullopt);
    ASSERT_EQ(reply.code_blocks.size(), 1u);
    EXPECT_EQ(reply.code_blocks[0].target_path, "docs/guide.md");
}

TEST(MockChat, UnrecognizedPromptHasNoBlocks) {
    MockGateway gw;
    std::vector<ChatMessage> msgs{user("how are you?")};
    auto reply = gw.complete_chat(msgs, std::nullopt);
    EXPECT_TRUE(reply.code_blocks.empty());
    EXPECT_FALSE(reply.text.empty());
}

TEST(MockChat, PreconditionsOnMessages) {
    MockGateway gw;
    std::vector<ChatMessage> none;
    EXPECT_EQ(code_of([&] { gw.complete_chat(none, std::nullopt); }), ErrorCode::Validation);
    std::vector<ChatMessage> ends_with_assistant{user("hi"), assistant("hello")};
    EXPECT_EQ(code_of([&] { gw.complete_chat(ends_with_assistant, std::nullopt); }), ErrorCode::Validation);
}

TEST(MockChat, ContextListsCheckpointTitles) {
    MockGateway gw;
    std::vector<ChatMessage> msgs{user("what happened so far?")};
    std::string context = "NODE 01A [Origin] Origin\nNODE 01B [AiPrompt] (active) Prompt: hi\n";
    auto reply = gw.complete_chat(msgs, context);
    EXPECT_NE(reply.text.find("2 checkpoint(s)"), std::string::npos);
    EXPECT_NE(reply.text.find("- Prompt: hi\n"), std::string::npos);
}

TEST(MockChat, Deterministic) {
    MockGateway a, b;
    std::vector<ChatMessage> msgs{user("write x.txt: hello")};
    EXPECT_EQ(a.complete_chat(msgs, std::nullopt).text, b.complete_chat(msgs, std::nullopt).text);
}

TEST(MockApplyEdit, AppendsAfterBlankLine) {
    MockGateway gw;
    EXPECT_EQ(gw.apply_edit(append_block("## Python"), "# Tutorial\n"), "# Tutorial\n\n## Python\n");
}

TEST(MockApplyEdit, AppendToEmptyFileIsBody) {
    MockGateway gw;
    EXPECT_EQ(gw.apply_edit(append_block("## Python\n"), ""), "## Python\n");
}

TEST(MockApplyEdit, FullFileSentinelReplaces) {
    MockGateway gw;
    EXPECT_EQ(gw.apply_edit(append_block("<FULL-FILE>\nnew body\n"), "old\n"), "new body\n");
}

TEST(MockApplyEdit, BlockWithoutTargetIsRejected) {
    MockGateway gw;
    CodeBlock display{"b1", "sh", "", "ls\n"};
    EXPECT_EQ(code_of([&] { gw.apply_edit(display, ""); }), ErrorCode::Validation);
}

TEST(MockMergeFiles, ConcatenatesOursThenTheirs) {
    MockGateway gw;
    std::string base = "x\n", ours = "A\n", theirs = "B\n";
    auto outcome = three_way_merge(base, ours, theirs);
    MergeFilesRequest req{"f.txt", base, line_diff(base, ours), line_diff(base, theirs), outcome.conflicts};
    EXPECT_EQ(gw.merge_files(req), "A\nB\n");
}

TEST(MockMergeFiles, RequiresConflicts) {
    MockGateway gw;
    MergeFilesRequest req{"f.txt", "x\n", {}, {}, {}};
    EXPECT_EQ(code_of([&] { gw.merge_files(req); }), ErrorCode::Validation);
}

TEST(MockSummary, BulletsPerUserPrompt) {
    MockGateway gw;
    std::vector<ChatMessage> none;
    EXPECT_EQ(gw.summarize_conversation(none), "No prior messages.");
    std::vector<ChatMessage> only_assistant{assistant("hello")};
    EXPECT_EQ(gw.summarize_conversation(only_assistant), "No prior messages.");
    std::vector<ChatMessage> two{user("first\nmore"), assistant("ok"), user("second")};
    EXPECT_EQ(gw.summarize_conversation(two), "- first\n- second");
}

TEST(MockTitle, EmptyDiff) {
    MockGateway gw;
    auto td = gw.title_description({}, CheckpointKind::ManualChange);
    EXPECT_EQ(td.title, "No code changes");
}

TEST(MockTitle, SingleFileTitleNamesPath) {
    MockGateway gw;
    WorkspaceDiff diff{{added("README.md", {"# Hi"})}};
    auto td = gw.title_description(diff, CheckpointKind::ManualChange);
    EXPECT_NE(td.title.find("README.md"), std::string::npos);
    EXPECT_LE(td.title.size(), kMaxTitleChars);
}

TEST(MockTitle, DescriptionListsEveryPath) {
    MockGateway gw;
    WorkspaceDiff diff{{added("a.txt", {"1"}), added("b.txt", {"2"}), added("c.txt", {"3"})}};
    auto td = gw.title_description(diff, CheckpointKind::AiCodeApplied);
    for (auto p : {"a.txt", "b.txt", "c.txt"})
        EXPECT_NE(td.description.find(p), std::string::npos) << p;
}

TEST(MockTitle, LongLineIsClamped) {
    MockGateway gw;
    WorkspaceDiff diff{{added("README.md", {std::string(200, 'w')})}};
    EXPECT_LE(gw.title_description(diff, CheckpointKind::ManualChange).title.size(), kMaxTitleChars);
}

TEST(FallbackTitle, NamesCountAndPaths) {
    WorkspaceDiff diff{{added("a.txt", {}), added("b.txt", {})}};
    auto td = fallback_title_description(diff);
    EXPECT_NE(td.title.find("Edited 2 file(s)"), std::string::npos);
    EXPECT_NE(td.description.find("a.txt, b.txt"), std::string::npos);
}
