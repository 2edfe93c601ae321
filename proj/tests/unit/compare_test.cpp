#include "evograph/compare.hpp"
#include "evograph/workspace.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace evograph;
using namespace evograph::testing;

TEST(Compare, DiffAndChatSections) {
    TempDir dir;
    MockGateway gateway;
    write_text(dir / "README.md", "# T\n");
    auto ws = Workspace::init(dir.path(), gateway, {fixed_clock(), 12, std::nullopt});
    auto pr = ws.send_prompt("append to README.md: more", false);
    auto applied = ws.apply_code_block(pr.assistant_message, "b1").id;
    auto report = compare_checkpoints(ws.state(), ws.store(), ws.graph().origin(), applied);
    EXPECT_EQ(report.diff.paths(), std::vector<std::string>{"README.md"});
    EXPECT_TRUE(report.only_active.empty());
    EXPECT_EQ(report.only_other.size(), 2u);
    EXPECT_NE(report.rendered.find("--- a/README.md\n+++ b/README.md\n"), std::string::npos);
    EXPECT_NE(report.rendered.find("+more\n"), std::string::npos);
    EXPECT_NE(report.rendered.find("--- chat ---\n+ user: append to README.md: more\n"), std::string::npos);
}

TEST(Compare, SameCheckpointHasNoDifferences) {
    TempDir dir;
    MockGateway gateway;
    auto ws = Workspace::init(dir.path(), gateway, {fixed_clock(), 13, std::nullopt});
    auto report = compare_checkpoints(ws.state(), ws.store(), ws.graph().origin(), ws.graph().origin());
    EXPECT_TRUE(report.diff.empty());
    EXPECT_NE(report.rendered.find("(no code changes)"), std::string::npos);
    EXPECT_NE(report.rendered.find("(no chat differences)"), std::string::npos);
}

TEST(Compare, AddedAndDeletedFilesUseDevNull) {
    TempDir store_dir;
    SnapshotStore store(store_dir.path());
    auto a = store.make_snapshot_from_contents({{"old.txt", "x\n"}});
    auto b = store.make_snapshot_from_contents({{"new.txt", "y\n"}});
    auto text = render_workspace_diff(store, a, b);
    EXPECT_NE(text.find("--- /dev/null\n+++ b/new.txt\n"), std::string::npos);
    EXPECT_NE(text.find("--- a/old.txt\n+++ /dev/null\n"), std::string::npos);
}
