#include "evograph/error.hpp"
#include "evograph/line_diff.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace evograph;
using namespace evograph::testing;

TEST(SplitLines, KeepsCarriageReturnAndMissingEol) {
    auto lines = split_lines("a\r\nb");
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0].text, "a\r");
    EXPECT_TRUE(lines[0].terminated);
    EXPECT_EQ(lines[1].text, "b");
    EXPECT_FALSE(lines[1].terminated);
    EXPECT_EQ(join_lines(lines), "a\r\nb");
    EXPECT_TRUE(split_lines("").empty());
}

TEST(LineDiff, SingleReplacementIsOneHunk) {
    auto hunks = line_diff("a\nb\n", "a\nc\n");
    ASSERT_EQ(hunks.size(), 1u);
    EXPECT_EQ(hunks[0].old_start, 2u);
    EXPECT_EQ(hunks[0].old_len, 1u);
    EXPECT_EQ(hunks[0].new_start, 2u);
    EXPECT_EQ(hunks[0].new_len, 1u);
    EXPECT_EQ(hunks[0].removed, std::vector<std::string>{"b"});
    EXPECT_EQ(hunks[0].added, std::vector<std::string>{"c"});
}

TEST(LineDiff, IdenticalTextsHaveNoHunks) { EXPECT_TRUE(line_diff("x\ny\n", "x\ny\n").empty()); }

TEST(LineDiff, PureInsertionAtEnd) {
    auto hunks = line_diff("a\n", "a\nb\n");
    ASSERT_EQ(hunks.size(), 1u);
    EXPECT_EQ(hunks[0].old_start, 2u);
    EXPECT_EQ(hunks[0].old_len, 0u);
    EXPECT_EQ(hunks[0].added, std::vector<std::string>{"b"});
}

TEST(LineDiff, MissingFinalNewlineIsAChange) {
    auto hunks = line_diff("a\nb", "a\nb\n");
    ASSERT_EQ(hunks.size(), 1u);
    EXPECT_TRUE(hunks[0].removed_missing_eol);
    EXPECT_FALSE(hunks[0].added_missing_eol);
    EXPECT_EQ(apply_hunks("a\nb", hunks), "a\nb\n");
}

namespace {

// Lines with their terminator, so "x" and "x\n" differ as in the engine.
std::vector<std::string> terminated_lines(const std::string& text) {
    auto lines = plain_lines(text);
    for (auto& l : lines)
        l += "\n";
    if (!text.empty() && text.back() != '\n')
        lines.back().pop_back();
    return lines;
}

} // namespace

TEST(LineDiff, EditCountIsMinimalAgainstDpOracle) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto a = random_text(rng, 25);
        auto b = rng() % 2 ? mutate_text(rng, a) : random_text(rng, 25);
        auto la = terminated_lines(a);
        auto lb = terminated_lines(b);
        std::size_t removed = 0;
        std::size_t added = 0;
        for (const auto& h : line_diff(a, b)) {
            removed += h.old_len;
            added += h.new_len;
        }
        auto lcs = lcs_length(la, lb);
        EXPECT_EQ(removed, la.size() - lcs);
        EXPECT_EQ(added, lb.size() - lcs);
        EXPECT_EQ(apply_hunks(a, line_diff(a, b)), b);
    }
}

TEST(LineDiff, MatchLinesIsIncreasingCommonSubsequence) {
    auto a = split_lines("x\ny\nz\nx\n");
    auto b = split_lines("y\nx\nz\n");
    auto pairs = match_lines(a, b);
    EXPECT_EQ(pairs.size(), 2u);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        EXPECT_EQ(a[pairs[i].first], b[pairs[i].second]);
        if (i > 0) {
            EXPECT_LT(pairs[i - 1].first, pairs[i].first);
            EXPECT_LT(pairs[i - 1].second, pairs[i].second);
        }
    }
}

TEST(LineDiff, ApplyRejectsMismatchedBase) {
    auto hunks = line_diff("a\nb\n", "a\nc\n");
    try {
        apply_hunks("a\nzzz\n", hunks);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Validation);
    }
}

TEST(UnifiedHunks, HeaderContextAndNoNewlineMarker) {
    EXPECT_EQ(unified_hunks("a\nb\nc\n", "a\nB\nc\n", 1), "@@ -1,3 +1,3 @@\n a\n-b\n+B\n c\n");
    EXPECT_EQ(unified_hunks("x", "y", 3), "@@ -1 +1 @@\n-x\n\\ No newline at end of file\n+y\n\\ No newline at end of file\n");
    EXPECT_EQ(unified_hunks("same\n", "same\n"), "");
}
