#include "evograph/chat.hpp"
#include "evograph/error.hpp"

#include <gtest/gtest.h>

using namespace evograph;

TEST(CodeBlocks, ParsesLanguagePathAndBody) {
    auto blocks = parse_code_blocks("Intro\n```python path=src/app.py\nprint(1)\n```\nbye\n");
    ASSERT_EQ(blocks.size(), 1u);
    EXPECT_EQ(blocks[0].block_id, "b1");
    EXPECT_EQ(blocks[0].language, "python");
    EXPECT_EQ(blocks[0].target_path, "src/app.py");
    EXPECT_EQ(blocks[0].body, "print(1)\n");
    EXPECT_TRUE(blocks[0].applicable());
}

TEST(CodeBlocks, BlockWithoutPathIsDisplayOnlyAndQuotedPathKeepsSpaces) {
    auto blocks = parse_code_blocks("```sh\nls\n```\n```text path=\"a b.txt\"\nx\n```\n");
    ASSERT_EQ(blocks.size(), 2u);
    EXPECT_FALSE(blocks[0].applicable());
    EXPECT_EQ(blocks[1].block_id, "b2");
    EXPECT_EQ(blocks[1].target_path, "a b.txt");
}

TEST(CodeBlocks, UnsafePathIsNotApplicable) {
    auto blocks = parse_code_blocks("```text path=../etc/passwd\nx\n```\n```text path=/abs\ny\n```\n");
    ASSERT_EQ(blocks.size(), 2u);
    EXPECT_FALSE(blocks[0].applicable());
    EXPECT_FALSE(blocks[1].applicable());
}

TEST(CodeBlocks, LongerFenceWrapsShorterOne) {
    auto blocks = parse_code_blocks("````md path=README.md\n```\ninner\n```\n````\n");
    ASSERT_EQ(blocks.size(), 1u);
    EXPECT_EQ(blocks[0].body, "```\ninner\n```\n");
}

TEST(CodeBlocks, UnterminatedFenceIsIgnored) { EXPECT_TRUE(parse_code_blocks("```py path=a.py\nx = 1\n").empty()); }

TEST(ChatStore, InsertRejectsDuplicateAndLooksUp) {
    ChatStore store;
    ChatSession s{ChatId{"c1"}, {}};
    s.messages.push_back({MessageId{"m1"}, Role::User, "hi", {}, {}});
    store.insert(s);
    EXPECT_TRUE(store.contains(ChatId{"c1"}));
    EXPECT_NE(store.at(ChatId{"c1"}).find(MessageId{"m1"}), nullptr);
    EXPECT_THROW(store.insert(s), Error);
    EXPECT_THROW(store.at(ChatId{"zz"}), Error);
}

TEST(ChatStore, MessagesNotIn) {
    ChatMessage a{MessageId{"a"}, Role::User, "a", {}, {}};
    ChatMessage b{MessageId{"b"}, Role::Assistant, "b", {}, {}};
    ChatMessage c{MessageId{"c"}, Role::User, "c", {}, {}};
    ChatSession ours{ChatId{"1"}, {a, b}};
    ChatSession theirs{ChatId{"2"}, {a, c}};
    auto extra = messages_not_in(theirs, ours);
    ASSERT_EQ(extra.size(), 1u);
    EXPECT_EQ(extra[0].id, MessageId{"c"});
}

TEST(Roles, RoundTrip) {
    for (auto r : {Role::User, Role::Assistant, Role::System})
        EXPECT_EQ(parse_role(to_string(r)), r);
    EXPECT_THROW(parse_role("robot"), Error);
}
