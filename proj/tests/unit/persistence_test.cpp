#include "evograph/error.hpp"
#include "evograph/persistence.hpp"
#include "evograph/workspace.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <unistd.h>

using namespace evograph;
using namespace evograph::testing;
using json = nlohmann::json;

namespace {

struct PersistenceFixture : ::testing::Test {
    TempDir dir;
    MockGateway gateway;
    std::optional<Workspace> ws;

    void SetUp() override {
        write_text(dir / "README.md", "# Tutorial\n");
        ws.emplace(Workspace::init(dir.path(), gateway, {fixed_clock(), 4, std::nullopt}));
        auto pr = ws->send_prompt("add a section about Python", false);
        ws->apply_code_block(pr.assistant_message, "b1");
    }

    std::string session_text() { return read_text(ws->session_dir() / kSessionFileName); }

    ErrorCode load_error(const std::string& text) {
        try {
            session_from_text(text);
        } catch (const Error& e) {
            return e.code();
        }
        ADD_FAILURE() << "text loaded";
        return ErrorCode::Io;
    }
};

} // namespace

TEST_F(PersistenceFixture, RoundTripIsExact) {
    auto text = session_to_text(ws->state());
    auto loaded = session_from_text(text);
    EXPECT_EQ(loaded, ws->state());
    EXPECT_EQ(session_to_text(loaded), text);
    EXPECT_EQ(session_text(), text);
}

TEST_F(PersistenceFixture, ReopenedWorkspaceHasSameState) {
    auto reopened = Workspace::open(dir.path(), gateway);
    EXPECT_EQ(reopened.state(), ws->state());
}

TEST_F(PersistenceFixture, TruncatedFileIsParseError) {
    auto text = session_text();
    EXPECT_EQ(load_error(text.substr(0, text.size() / 2)), ErrorCode::Parse);
    EXPECT_EQ(load_error(""), ErrorCode::Parse);
    EXPECT_EQ(load_error("{}"), ErrorCode::Parse);
}

TEST_F(PersistenceFixture, FutureVersionIsRejected) {
    auto j = json::parse(session_text());
    j["format_version"] = kSessionFormatVersion + 1;
    EXPECT_EQ(load_error(j.dump()), ErrorCode::UnsupportedVersion);
}

TEST_F(PersistenceFixture, DanglingParentIsCorruptionNamingTheId) {
    auto j = json::parse(session_text());
    auto active = j["graph"]["active"].get<std::string>();
    j["graph"]["checkpoints"][active]["parents"] = json::array({"01ZZZZZZZZZZZZZZZZZZZZZZZZ"});
    try {
        session_from_text(j.dump());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Corruption);
        EXPECT_NE(e.detail().find("01ZZZZZZZZZZZZZZZZZZZZZZZZ"), std::string::npos);
    }
}

TEST_F(PersistenceFixture, DanglingChatAndActiveAreCorruption) {
    auto j = json::parse(session_text());
    j["chats"] = json::object();
    EXPECT_EQ(load_error(j.dump()), ErrorCode::Corruption);

    j = json::parse(session_text());
    j["graph"]["active"] = "missing";
    EXPECT_EQ(load_error(j.dump()), ErrorCode::Corruption);
}

TEST_F(PersistenceFixture, MissingManifestDetectedAgainstStore) {
    auto state = ws->state();
    fs::remove_all(ws->session_dir() / "snapshots");
    try {
        validate_session(state, &ws->store());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Corruption);
    }
}

TEST_F(PersistenceFixture, UnwritableDirectoryIsIoErrorAndKeepsOldFile) {
    if (geteuid() == 0)
        GTEST_SKIP() << "root ignores directory permissions";
    auto before = session_text();
    fs::permissions(ws->session_dir(), fs::perms::owner_read | fs::perms::owner_exec);
    try {
        save_session(ws->state(), ws->session_dir());
        ADD_FAILURE() << "save succeeded";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
    fs::permissions(ws->session_dir(), fs::perms::owner_all);
    EXPECT_EQ(session_text(), before);
}

TEST_F(PersistenceFixture, BlockedTempPathIsIoErrorAndKeepsOldFile) {
    auto before = session_text();
    write_text(ws->session_dir() / "session.json.tmp" / "occupied", "x");
    try {
        save_session(ws->state(), ws->session_dir());
        ADD_FAILURE() << "save succeeded";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
    EXPECT_EQ(session_text(), before);
}

TEST_F(PersistenceFixture, SaveToMissingDirectoryIsIoError) {
    try {
        save_session(ws->state(), dir / "no/such/dir");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
}

TEST_F(PersistenceFixture, LeftoverTempFileDoesNotAffectLoad) {
    write_text(ws->session_dir() / "session.json.tmp", "{ half written");
    EXPECT_EQ(load_session(ws->session_dir()), ws->state());
}

TEST(Persistence, MissingSessionIsNotFound) {
    TempDir dir;
    try {
        load_session(dir.path());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotFound);
    }
}

TEST(Persistence, SettingsRoundTrip) {
    TempDir dir;
    MockGateway gateway;
    IgnoreRules rules;
    rules.patterns = {"*.log"};
    rules.max_file_bytes = 1234;
    auto ws = Workspace::init(dir.path(), gateway, {fixed_clock(), 1, rules});
    auto loaded = load_session(ws.session_dir());
    EXPECT_EQ(loaded.settings.ignore, rules);
    EXPECT_EQ(loaded.settings.context_budget, kDefaultContextBudget);
}
