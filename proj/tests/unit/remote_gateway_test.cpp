#include "evograph/error.hpp"
#include "evograph/remote_gateway.hpp"

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <mutex>
#include <thread>

using namespace evograph;
using json = nlohmann::json;

namespace {

// Local stand-in for a chat-completion endpoint.
class FakeEndpoint {
public:
    FakeEndpoint() {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            std::lock_guard lock(mutex_);
            requests_.push_back(json::parse(req.body));
            auth_ = req.get_header_value("Authorization");
            res.status = status_;
            json reply{{"choices", json::array({{{"message", {{"role", "assistant"}, {"content", reply_}}}}})}};
            res.set_content(status_ == 200 ? reply.dump() : "{\"error\":\"nope\"}", "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeEndpoint() {
        server_.stop();
        thread_.join();
    }

    RemoteGatewayConfig config() const {
        RemoteGatewayConfig cfg;
        cfg.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
        cfg.api_key = "secret";
        cfg.model = "test-model";
        cfg.timeout = std::chrono::seconds(5);
        return cfg;
    }
    void reply_with(std::string text, int status = 200) {
        std::lock_guard lock(mutex_);
        reply_ = std::move(text);
        status_ = status;
    }
    json last_request() {
        std::lock_guard lock(mutex_);
        return requests_.back();
    }
    std::string auth() {
        std::lock_guard lock(mutex_);
        return auth_;
    }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::mutex mutex_;
    std::vector<json> requests_;
    std::string reply_ = "ok";
    std::string auth_;
    int status_ = 200;
};

std::vector<ChatMessage> one_prompt(const std::string& text) { return {{MessageId{"m"}, Role::User, text, {}, {}}}; }

} // namespace

TEST(RemoteGateway, ChatSendsModelMessagesAndKey) {
    FakeEndpoint fake;
    fake.reply_with("Sure.\n```python path=hello.py\nprint('hi')\n```\n");
    RemoteGateway gw(fake.config());
    auto reply = gw.complete_chat(one_prompt("say hi"), std::string("NODE x [Origin] Origin"));
    ASSERT_EQ(reply.code_blocks.size(), 1u);
    EXPECT_EQ(reply.code_blocks[0].target_path, "hello.py");

    auto req = fake.last_request();
    EXPECT_EQ(req["model"], "test-model");
    EXPECT_EQ(fake.auth(), "Bearer secret");
    const auto& msgs = req["messages"];
    ASSERT_EQ(msgs.size(), 3u);
    EXPECT_EQ(msgs[0]["role"], "system");
    EXPECT_EQ(msgs[1]["role"], "system");
    EXPECT_NE(msgs[1]["content"].get<std::string>().find("NODE x [Origin] Origin"), std::string::npos);
    EXPECT_EQ(msgs[2]["role"], "user");
    EXPECT_EQ(msgs[2]["content"], "say hi");
}

TEST(RemoteGateway, TitleParsesLabelledReply) {
    FakeEndpoint fake;
    fake.reply_with("TITLE: Add greeting\nDESCRIPTION: Adds hello.py.\n");
    RemoteGateway gw(fake.config());
    auto td = gw.title_description({}, CheckpointKind::ManualChange);
    EXPECT_EQ(td.title, "Add greeting");
    EXPECT_EQ(td.description, "Adds hello.py.");
}

TEST(RemoteGateway, ApplyEditStripsWrappingFence) {
    FakeEndpoint fake;
    fake.reply_with("```python\nprint(2)\n```\n");
    RemoteGateway gw(fake.config());
    CodeBlock block{"b1", "python", "a.py", "print(2)\n"};
    EXPECT_EQ(gw.apply_edit(block, "print(1)\n"), "print(2)\n");
    auto content = fake.last_request()["messages"][1]["content"].get<std::string>();
    EXPECT_NE(content.find("print(1)"), std::string::npos);
    EXPECT_NE(content.find("a.py"), std::string::npos);
}

TEST(RemoteGateway, HttpErrorsBecomeGatewayErrors) {
    FakeEndpoint fake;
    RemoteGateway gw(fake.config());
    for (int status : {401, 500}) {
        fake.reply_with("", status);
        try {
            gw.summarize_conversation(one_prompt("x"));
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::Gateway);
        }
    }
}

TEST(RemoteGateway, UnreachableEndpointIsGatewayError) {
    RemoteGatewayConfig cfg;
    cfg.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    cfg.timeout = std::chrono::seconds(2);
    RemoteGateway gw(cfg);
    try {
        gw.complete_chat(one_prompt("x"), std::nullopt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Gateway);
    }
}

TEST(RemoteGateway, RejectsEndpointWithoutScheme) {
    RemoteGatewayConfig cfg;
    cfg.endpoint = "localhost:8080";
    EXPECT_THROW(RemoteGateway{cfg}, Error);
}

TEST(RemoteGateway, StripOuterFence) {
    EXPECT_EQ(strip_outer_fence("```\nx\n```"), "x\n");
    EXPECT_EQ(strip_outer_fence("plain\n"), "plain\n");
    EXPECT_EQ(strip_outer_fence("```\nx\n```\ntrailing"), "```\nx\n```\ntrailing");
}
