#include "evograph/error.hpp"
#include "evograph/gateway.hpp"

#include <algorithm>
#include <cctype>

namespace evograph {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string first_line(std::string_view s) {
    s = trim(s);
    return std::string(s.substr(0, s.find('\n')));
}

std::string with_newline(std::string s) {
    if (!s.empty() && s.back() != '\n')
        s.push_back('\n');
    return s;
}

std::string block(std::string_view language, std::string_view path, std::string_view body) {
    return "```" + std::string(language) + " path=" + std::string(path) + "\n" + with_newline(std::string(body)) +
           "```\n";
}

// "add a section about Python to the README" -> ("Python", "README.md")
std::optional<std::pair<std::string, std::string>> section_directive(std::string_view prompt) {
    static constexpr std::string_view kKey = "add a section about ";
    auto low = lower(prompt);
    auto at = low.find(kKey);
    if (at == std::string::npos)
        return std::nullopt;
    auto rest = prompt.substr(at + kKey.size());
    auto low_rest = std::string_view(low).substr(at + kKey.size());
    auto end = std::min({low_rest.find(" to "), low_rest.find_first_of(".,!?\n")});
    auto topic = std::string(trim(rest.substr(0, end)));
    if (topic.empty())
        return std::nullopt;
    std::string target = "README.md";
    if (auto to = low_rest.find(" to "); to != std::string_view::npos) {
        auto dest = trim(rest.substr(to + 4));
        if (dest.starts_with("the ") || dest.starts_with("The "))
            dest.remove_prefix(4);
        auto token = std::string(dest.substr(0, dest.find_first_of(" \t\n,!?")));
        while (!token.empty() && token.back() == '.')
            token.pop_back();
        if (token.find('.') != std::string::npos && lower(token) != "readme")
            target = token;
    }
    return std::make_pair(topic, target);
}

// "<verb> <path>: <text>" with verb "write" or "append to"
std::optional<std::pair<std::string, std::string>> file_directive(std::string_view prompt, std::string_view verb) {
    auto t = trim(prompt);
    if (lower(t.substr(0, verb.size())) != verb)
        return std::nullopt;
    auto rest = t.substr(verb.size());
    auto colon = rest.find(':');
    if (colon == std::string_view::npos)
        return std::nullopt;
    auto path = std::string(trim(rest.substr(0, colon)));
    auto text = rest.substr(colon + 1);
    if (!text.empty() && text.front() == ' ')
        text.remove_prefix(1);
    if (path.empty())
        return std::nullopt;
    return std::make_pair(path, std::string(text));
}

} // namespace

std::string MockGateway::do_complete_chat(std::span<const ChatMessage> messages,
                                          const std::optional<std::string>& context) {
    const auto& prompt = messages.back().text;
    std::string reply;

    if (context) {
        std::vector<std::string> titles;
        std::size_t pos = 0;
        while (pos < context->size()) {
            auto nl = context->find('\n', pos);
            auto line = std::string_view(*context).substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
            pos = nl == std::string::npos ? context->size() : nl + 1;
            auto t = trim(line);
            if (t.starts_with("NODE ")) {
                // NODE <id> [<kind>] [(active) ]<title>
                auto close = t.find("] ");
                if (close != std::string_view::npos) {
                    auto title = t.substr(close + 2);
                    if (title.starts_with("(active) "))
                        title.remove_prefix(9);
                    titles.emplace_back(title);
                }
            }
        }
        reply += "The development graph lists " + std::to_string(titles.size()) + " checkpoint(s):\n";
        for (const auto& title : titles)
            reply += "- " + title + "\n";
        reply += "\n";
    }

    if (auto section = section_directive(prompt)) {
        const auto& [topic, target] = *section;
        reply += "Here is a new section about " + topic + " for " + target + ":\n\n";
        reply += block("markdown", target, "## " + topic + "\n\nThis section describes " + topic + ".\n");
    } else if (auto write = file_directive(prompt, "write ")) {
        reply += "Here is the new content of " + write->first + ":\n\n";
        reply += block("text", write->first, std::string(kFullFileSentinel) + "\n" + write->second);
    } else if (auto append = file_directive(prompt, "append to ")) {
        reply += "Add this to " + append->first + ":\n\n";
        reply += block("text", append->first, append->second);
    } else if (!context) {
        reply += "I can help with that. No code changes are suggested for this request.\n";
    }
    return reply;
}

TitleDescription MockGateway::do_title_description(const WorkspaceDiff& diff, CheckpointKind kind,
                                                   const PromptExchange* exchange) {
    if (exchange) {
        TitleDescription td{"Prompt: " + first_line(exchange->prompt),
                            "Asked: " + first_line(exchange->prompt) + "\nReply: " + first_line(exchange->response)};
        auto blocks = parse_code_blocks(exchange->response).size();
        td.description += blocks == 0 ? "\nNo code changes suggested."
                                      : "\nSuggested code blocks: " + std::to_string(blocks) + ".";
        return td;
    }
    if (diff.empty())
        return {"No code changes", "Prompt-only step; the workspace is unchanged."};

    auto verb = [](FileChangeKind k) -> std::string {
        switch (k) {
        case FileChangeKind::Added: return "Add";
        case FileChangeKind::Deleted: return "Delete";
        default: return "Update";
        }
    };
    std::string title;
    if (diff.files.size() == 1) {
        const auto& f = diff.files.front();
        title = verb(f.kind) + " " + f.path;
        const std::vector<std::string>* added = &f.lines;
        std::vector<std::string> hunk_lines;
        for (const auto& h : f.hunks)
            hunk_lines.insert(hunk_lines.end(), h.added.begin(), h.added.end());
        if (f.kind == FileChangeKind::Modified)
            added = &hunk_lines;
        auto it = std::find_if(added->begin(), added->end(), [](const std::string& l) { return !trim(l).empty(); });
        if (it != added->end())
            title += ": " + std::string(trim(*it));
    } else {
        title = "Update " + std::to_string(diff.files.size()) + " files";
    }

    std::string description = kind == CheckpointKind::ManualChange ? "Manual edit of " : "AI edit of ";
    description += std::to_string(diff.files.size()) + " file(s):";
    for (const auto& f : diff.files) {
        std::size_t plus = f.lines.size(), minus = 0;
        for (const auto& h : f.hunks) {
            plus += h.new_len;
            minus += h.old_len;
        }
        description += "\n- " + std::string(to_string(f.kind)) + " " + f.path;
        if (f.kind == FileChangeKind::Modified || f.kind == FileChangeKind::Added)
            description += " (+" + std::to_string(plus) + " -" + std::to_string(minus) + ")";
    }
    return {title, description};
}

std::string MockGateway::do_apply_edit(const CodeBlock& block, std::string_view current) {
    if (auto at = block.body.find(kFullFileSentinel); at != std::string::npos) {
        auto body = block.body;
        auto line_end = at + kFullFileSentinel.size();
        bool own_line = (at == 0 || body[at - 1] == '\n') && line_end < body.size() && body[line_end] == '\n';
        body.erase(at, kFullFileSentinel.size() + (own_line ? 1 : 0));
        return body;
    }
    auto body = with_newline(block.body);
    auto kept = current;
    while (!kept.empty() && kept.back() == '\n')
        kept.remove_suffix(1);
    if (kept.empty())
        return body;
    return std::string(kept) + "\n\n" + body;
}

std::string MockGateway::do_merge_files(const MergeFilesRequest& request) {
    auto ours = apply_hunks(request.base, request.ours_diff);
    auto theirs = apply_hunks(request.base, request.theirs_diff);
    return three_way_merge(request.base, ours, theirs, ConflictStyle::Union).merged;
}

std::string MockGateway::do_summarize_conversation(std::span<const ChatMessage> messages) {
    std::string out;
    for (const auto& m : messages)
        if (m.role == Role::User)
            out += "- " + first_line(m.text) + "\n";
    if (out.empty())
        return "No prior messages.";
    out.pop_back();
    return out;
}

} // namespace evograph
