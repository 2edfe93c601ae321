#include "evograph/remote_gateway.hpp"
#include "evograph/error.hpp"
#include "evograph/prompt_templates.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>

namespace evograph {

namespace {

using Messages = std::vector<std::pair<std::string, std::string>>;

// Single pass, so substituted values are never rescanned for placeholders.
std::string render(std::string_view tmpl, std::initializer_list<std::pair<std::string_view, std::string_view>> vars) {
    std::string out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        auto open = tmpl.find("{{", pos);
        auto close = open == std::string_view::npos ? open : tmpl.find("}}", open + 2);
        if (close == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        out.append(tmpl.substr(pos, open - pos));
        auto key = tmpl.substr(open + 2, close - open - 2);
        auto it = std::find_if(vars.begin(), vars.end(), [&](const auto& v) { return v.first == key; });
        if (it != vars.end())
            out.append(it->second);
        else
            out.append(tmpl.substr(open, close + 2 - open));
        pos = close + 2;
    }
    return out;
}

std::string render_hunks(const std::vector<DiffHunk>& hunks) {
    std::string out;
    for (const auto& h : hunks) {
        out += "@@ -" + std::to_string(h.old_start) + "," + std::to_string(h.old_len) + " +" +
               std::to_string(h.new_start) + "," + std::to_string(h.new_len) + " @@\n";
        for (const auto& l : h.removed)
            out += "-" + l + "\n";
        for (const auto& l : h.added)
            out += "+" + l + "\n";
    }
    return out;
}

std::string render_diff(const WorkspaceDiff& diff) {
    std::string out;
    for (const auto& f : diff.files) {
        out += "file " + f.path + " (" + std::string(to_string(f.kind)) + ")\n";
        for (const auto& l : f.lines)
            out += "+" + l + "\n";
        out += render_hunks(f.hunks);
    }
    return out.empty() ? "(no code changes)\n" : out;
}

std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines)
        out += l + "\n";
    return out;
}

} // namespace

std::optional<RemoteGatewayConfig> RemoteGatewayConfig::from_env() {
    const char* endpoint = std::getenv("EVOGRAPH_LLM_ENDPOINT");
    if (!endpoint || !*endpoint)
        return std::nullopt;
    RemoteGatewayConfig cfg;
    cfg.endpoint = endpoint;
    if (const char* key = std::getenv("EVOGRAPH_LLM_KEY"))
        cfg.api_key = key;
    if (const char* model = std::getenv("EVOGRAPH_LLM_MODEL"); model && *model)
        cfg.model = model;
    return cfg;
}

std::unique_ptr<AssistantGateway> make_gateway_from_env() {
    if (auto cfg = RemoteGatewayConfig::from_env())
        return std::make_unique<RemoteGateway>(std::move(*cfg));
    return std::make_unique<MockGateway>();
}

std::string strip_outer_fence(std::string_view text) {
    auto b = text.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos || text.substr(b, 3) != "```")
        return std::string(text);
    auto first_nl = text.find('\n', b);
    auto close = text.rfind("```");
    if (first_nl == std::string_view::npos || close <= first_nl)
        return std::string(text);
    if (text.substr(close + 3).find_first_not_of(" \t\r\n") != std::string_view::npos)
        return std::string(text);
    return std::string(text.substr(first_nl + 1, close - first_nl - 1));
}

RemoteGateway::RemoteGateway(RemoteGatewayConfig config) : config_(std::move(config)) {
    auto scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos)
        throw Error(ErrorCode::Validation, "EVOGRAPH_LLM_ENDPOINT must be an http(s) URL", config_.endpoint);
    auto path_start = config_.endpoint.find('/', scheme_end + 3);
    origin_ = config_.endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);
}

std::string RemoteGateway::request_body(const Messages& messages) const {
    nlohmann::json body;
    body["model"] = config_.model;
    body["temperature"] = 0;
    body["messages"] = nlohmann::json::array();
    for (const auto& [role, content] : messages)
        body["messages"].push_back({{"role", role}, {"content", content}});
    return body.dump();
}

std::string RemoteGateway::complete(const Messages& messages) {
    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    httplib::Headers headers;
    if (!config_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + config_.api_key);
    auto res = client.Post(path_, headers, request_body(messages), "application/json");
    if (!res)
        throw Error(ErrorCode::Gateway, "assistant endpoint unreachable", httplib::to_string(res.error()));
    if (res->status == 401 || res->status == 403)
        throw Error(ErrorCode::Gateway, "assistant endpoint rejected the credentials", std::to_string(res->status));
    if (res->status != 200)
        throw Error(ErrorCode::Gateway, "assistant endpoint returned an error",
                    std::to_string(res->status) + ": " + res->body.substr(0, 512));
    try {
        auto j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Gateway, "malformed assistant response", e.what());
    }
}

std::string RemoteGateway::do_complete_chat(std::span<const ChatMessage> messages,
                                            const std::optional<std::string>& context) {
    Messages wire{{"system", std::string(prompts::chat_system)}};
    if (context)
        wire.emplace_back("system", render(prompts::chat_context, {{"context", *context}}));
    for (const auto& m : messages)
        wire.emplace_back(std::string(to_string(m.role)), m.text);
    return complete(wire);
}

TitleDescription RemoteGateway::do_title_description(const WorkspaceDiff& parent_diff, CheckpointKind kind,
                                                     const PromptExchange* exchange) {
    std::string material = exchange ? "User prompt:\n" + exchange->prompt + "\n\nAssistant response:\n" +
                                          exchange->response
                                    : "Code diff from the parent checkpoint:\n" + render_diff(parent_diff);
    auto reply = complete({{"user", render(prompts::title_description,
                                           {{"kind", to_string(kind)}, {"material", material}})}});
    TitleDescription td;
    auto t = reply.find("TITLE:");
    auto d = reply.find("DESCRIPTION:");
    if (t != std::string::npos && d != std::string::npos && t < d) {
        td.title = reply.substr(t + 6, d - t - 6);
        td.description = reply.substr(d + 12);
    } else {
        auto nl = reply.find('\n');
        td.title = reply.substr(0, nl);
        td.description = nl == std::string::npos ? std::string{} : reply.substr(nl + 1);
    }
    auto trim = [](std::string& s) {
        s.erase(0, s.find_first_not_of(" \t\r\n"));
        s.erase(s.find_last_not_of(" \t\r\n") + 1);
    };
    trim(td.title);
    trim(td.description);
    return td;
}

std::string RemoteGateway::do_apply_edit(const CodeBlock& block, std::string_view current) {
    auto reply = complete({{"system", std::string(prompts::chat_system)},
                           {"user", render(prompts::apply_edit, {{"path", block.target_path},
                                                                 {"current", current},
                                                                 {"block", block.body}})}});
    return strip_outer_fence(reply);
}

std::string RemoteGateway::do_merge_files(const MergeFilesRequest& request) {
    std::string conflicts;
    for (const auto& c : request.conflicts)
        conflicts += "--- base\n" + join(c.base_lines) + "--- active\n" + join(c.ours_lines) + "--- other\n" +
                     join(c.theirs_lines);
    auto reply = complete({{"user", render(prompts::merge_files, {{"path", request.path},
                                                                  {"base", request.base},
                                                                  {"ours_diff", render_hunks(request.ours_diff)},
                                                                  {"theirs_diff", render_hunks(request.theirs_diff)},
                                                                  {"conflicts", conflicts}})}});
    return strip_outer_fence(reply);
}

std::string RemoteGateway::do_summarize_conversation(std::span<const ChatMessage> messages) {
    if (messages.empty())
        return "No prior messages.";
    std::string transcript;
    for (const auto& m : messages)
        transcript += std::string(to_string(m.role)) + ": " + m.text + "\n";
    return complete({{"user", render(prompts::summarize_conversation, {{"messages", transcript}})}});
}

} // namespace evograph
