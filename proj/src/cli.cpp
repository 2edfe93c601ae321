#include "evograph/cli.hpp"
#include "evograph/compare.hpp"
#include "evograph/error.hpp"
#include "evograph/json_io.hpp"
#include "evograph/provenance.hpp"
#include "evograph/service.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <csignal>
#include <ostream>
#include <thread>

#include <pthread.h>

namespace evograph {

namespace {

std::string dump(const json& j) { return j.dump(2, ' ', false, json::error_handler_t::replace); }

std::string summary_line(const Checkpoint& cp) { return cp.id.str() + "  " + std::string(to_string(cp.kind)) + "  " + cp.title; }

json checkpoint_json(const DevGraph& graph, const Checkpoint& cp) {
    auto j = to_json(cp);
    j["color"] = color_token(cp.kind);
    j["active"] = cp.id == graph.active();
    return j;
}

// Latest assistant message of the active chat with an applicable block.
std::pair<MessageId, std::string> default_block(const Workspace& ws) {
    const auto& chat = ws.state().chats.at(ws.graph().active_checkpoint().chat);
    for (auto it = chat.messages.rbegin(); it != chat.messages.rend(); ++it) {
        if (it->role != Role::Assistant)
            continue;
        for (const auto& b : it->code_blocks)
            if (b.applicable())
                return {it->id, b.block_id};
    }
    throw Error(ErrorCode::NotFound, "the active chat has no applicable code block");
}

int serve(Workspace ws, const std::string& host, int port, std::ostream& out) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    // Service threads inherit the mask; this thread collects the signal.
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    Service service(std::move(ws));
    auto bound = service.bind(host, port);
    out << "listening on http://" << host << ":" << bound << "\n" << std::flush;
    std::thread server([&service] { service.run(); });
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
    server.join();
    pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
    return 0;
}

} // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, CliContext context) {
    CLI::App app{"Micro-versioning for AI-assisted programming sessions", "evograph"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string root = context.default_root.string();
    bool as_json = false;
    app.add_option("--root", root, "Workspace directory");
    app.add_flag("--json", as_json, "Machine-readable output");

    auto* init = app.add_subcommand("init", "Start a session in the workspace");

    std::optional<std::string> title;
    std::optional<std::string> description;
    auto* checkpoint = app.add_subcommand("checkpoint", "Checkpoint manual edits");
    checkpoint->add_option("--title", title, "Title (default: generated)");
    checkpoint->add_option("--description", description, "Description (default: generated)");

    std::vector<std::string> words;
    bool with_graph = false;
    auto* prompt = app.add_subcommand("prompt", "Send a prompt to the assistant");
    prompt->add_flag("--with-graph", with_graph, "Include the development graph as context");
    prompt->add_option("text", words, "Prompt text")->required();

    std::string source;
    std::string message;
    auto* edit_prompt = app.add_subcommand("edit-prompt", "Re-send an earlier prompt as a new branch");
    edit_prompt->add_option("--checkpoint", source, "Checkpoint whose chat holds the prompt")->default_val("active");
    edit_prompt->add_option("--message", message, "User message id")->required();
    edit_prompt->add_flag("--with-graph", with_graph, "Include the development graph as context");
    edit_prompt->add_option("text", words, "New prompt text")->required();

    std::string block;
    auto* apply = app.add_subcommand("apply", "Apply an assistant code block");
    apply->add_option("--message", message, "Assistant message id (default: latest with a block)");
    apply->add_option("--block", block, "Block id (default: first applicable)");

    std::string target;
    auto* switch_cmd = app.add_subcommand("switch", "Restore the workspace to a checkpoint");
    switch_cmd->add_option("id", target, "Checkpoint id, unique prefix, origin or active")->required();

    auto* compare = app.add_subcommand("compare", "Diff the active checkpoint against another");
    compare->add_option("other", target, "Checkpoint to compare with")->required();

    auto* merge = app.add_subcommand("merge", "Merge another checkpoint into the active one");
    merge->add_option("other", target, "Checkpoint to merge in")->required();

    auto* remove = app.add_subcommand("delete", "Delete a checkpoint");
    remove->add_option("id", target, "Checkpoint to delete")->required();

    auto* rename = app.add_subcommand("rename", "Edit a checkpoint's title or description");
    rename->add_option("id", target, "Checkpoint to edit")->required();
    rename->add_option("--title", title, "New title");
    rename->add_option("--description", description, "New description");

    auto* review = app.add_subcommand("review", "Show AI and human authorship of changed lines");
    auto* log = app.add_subcommand("log", "List checkpoints");

    auto* chat = app.add_subcommand("chat", "Show the chat of a checkpoint");
    chat->add_option("--checkpoint", target, "Checkpoint (default: active)");

    std::string host = "127.0.0.1";
    int port = 8765;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--bind", host, "Address to listen on");
    serve_cmd->add_option("--port", port, "Port (0 picks a free one)");

    auto* gc = app.add_subcommand("gc", "Delete snapshots no checkpoint references");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    auto join_words = [&] {
        std::string text;
        for (const auto& w : words) {
            if (!text.empty())
                text += " ";
            text += w;
        }
        return text;
    };

    try {
        std::unique_ptr<AssistantGateway> owned;
        auto* gateway = context.gateway;
        if (!gateway) {
            owned = make_gateway_from_env();
            gateway = owned.get();
        }
        std::filesystem::path dir(root);

        if (init->parsed()) {
            auto ws = Workspace::init(dir, *gateway, context.options);
            const auto& origin = ws.graph().active_checkpoint();
            auto files = ws.store().load(origin.snapshot).entries.size();
            if (as_json)
                out << dump({{"origin", checkpoint_json(ws.graph(), origin)}, {"files", files}}) << "\n";
            else
                out << "initialized " << dir.string() << "\n" << summary_line(origin) << "  (" << files << " files)\n";
            return 0;
        }

        auto ws = Workspace::open(dir, *gateway, context.options);
        const auto& graph = ws.graph();

        auto print_checkpoint = [&](const Checkpoint& cp) {
            if (as_json)
                out << dump({{"checkpoint", checkpoint_json(graph, cp)}}) << "\n";
            else
                out << summary_line(cp) << "\n";
        };
        auto print_prompt = [&](const PromptResult& r) {
            const auto& cp = graph.at(r.checkpoint);
            const auto* reply = ws.state().chats.at(cp.chat).find(r.assistant_message);
            if (as_json) {
                out << dump({{"checkpoint", checkpoint_json(graph, cp)},
                             {"user_message", r.user_message.str()},
                             {"assistant", to_json(*reply)}})
                    << "\n";
                return;
            }
            out << reply->text;
            if (!reply->text.ends_with('\n'))
                out << "\n";
            out << "\n" << summary_line(cp) << "\n";
            for (const auto& b : reply->code_blocks)
                if (b.applicable())
                    out << "block " << reply->id.str() << " " << b.block_id << " -> " << b.target_path << "\n";
        };

        if (checkpoint->parsed()) {
            print_checkpoint(ws.checkpoint_manual(title, description));
        } else if (prompt->parsed()) {
            print_prompt(ws.send_prompt(join_words(), with_graph));
        } else if (edit_prompt->parsed()) {
            print_prompt(ws.edit_prompt(ws.resolve(source), MessageId{message}, join_words(), with_graph));
        } else if (apply->parsed()) {
            MessageId msg{message};
            if (message.empty()) {
                auto [m, b] = default_block(ws);
                msg = m;
                if (block.empty())
                    block = b;
            } else if (block.empty()) {
                const auto* found = ws.state().chats.at(graph.active_checkpoint().chat).find(msg);
                if (found)
                    for (const auto& b : found->code_blocks)
                        if (b.applicable()) {
                            block = b.block_id;
                            break;
                        }
                if (block.empty())
                    throw Error(ErrorCode::NotFound, "message has no applicable code block", message);
            }
            print_checkpoint(ws.apply_code_block(msg, block));
        } else if (switch_cmd->parsed()) {
            auto report = ws.switch_to(ws.resolve(target));
            if (as_json)
                out << dump({{"active", graph.active().str()}, {"written", report.written}, {"deleted", report.deleted}})
                    << "\n";
            else
                out << "active " << summary_line(graph.active_checkpoint()) << "  (" << report.written.size()
                    << " written, " << report.deleted.size() << " deleted)\n";
        } else if (compare->parsed()) {
            auto report = compare_checkpoints(ws.state(), ws.store(), graph.active(), ws.resolve(target));
            if (as_json) {
                json only_active = json::array();
                json only_other = json::array();
                for (const auto& m : report.only_active)
                    only_active.push_back(to_json(m));
                for (const auto& m : report.only_other)
                    only_other.push_back(to_json(m));
                out << dump({{"active", report.active.str()},
                             {"other", report.other.str()},
                             {"diff", to_json(report.diff)},
                             {"only_active", only_active},
                             {"only_other", only_other},
                             {"rendered", report.rendered}})
                    << "\n";
            } else {
                out << report.rendered;
            }
        } else if (merge->parsed()) {
            auto r = ws.merge_with(ws.resolve(target));
            for (const auto& w : r.warnings)
                err << "warning: " << w << "\n";
            if (as_json)
                out << dump({{"checkpoint", checkpoint_json(graph, graph.at(r.checkpoint))},
                             {"lca", r.lca.str()},
                             {"conflicted_paths", r.conflicted_paths},
                             {"warnings", r.warnings},
                             {"gateway_failed", r.gateway_failed}})
                    << "\n";
            else
                out << summary_line(graph.at(r.checkpoint)) << "\n";
        } else if (remove->parsed()) {
            auto delta = ws.delete_checkpoint(ws.resolve(target));
            if (as_json) {
                json reattached = json::array();
                for (const auto& c : delta.reattached)
                    reattached.push_back(c.str());
                out << dump({{"removed", delta.removed.str()},
                             {"reattached", reattached},
                             {"new_parent", delta.new_parent.str()},
                             {"active", graph.active().str()},
                             {"active_moved", delta.active_moved}})
                    << "\n";
            } else {
                out << "deleted " << delta.removed.str() << "; " << delta.reattached.size()
                    << " child(ren) now under " << delta.new_parent.str() << "\n";
            }
        } else if (rename->parsed()) {
            print_checkpoint(ws.edit_metadata(ws.resolve(target), title, description));
        } else if (review->parsed()) {
            auto pmap = compute_provenance(graph, ws.store());
            if (as_json)
                out << dump({{"provenance", to_json(pmap)}, {"summary", to_json(provenance_summary(pmap))}}) << "\n";
            else
                out << render_review(graph, pmap);
        } else if (log->parsed()) {
            if (as_json) {
                out << dump(graph_to_json(graph)) << "\n";
            } else {
                for (const auto& id : graph.topological_order()) {
                    const auto& cp = graph.at(id);
                    out << (id == graph.active() ? "* " : "  ") << summary_line(cp);
                    if (cp.parents.size() > 1)
                        out << "  (merges " << cp.parents[1].str() << ")";
                    out << "\n";
                }
            }
        } else if (chat->parsed()) {
            auto id = target.empty() ? graph.active() : ws.resolve(target);
            const auto& session = ws.state().chats.at(graph.at(id).chat);
            if (as_json) {
                auto j = to_json(session);
                j["id"] = session.id.str();
                out << dump(j) << "\n";
            } else {
                for (const auto& m : session.messages) {
                    out << "[" << to_string(m.role) << " " << m.id.str() << "]\n" << m.text;
                    if (!m.text.ends_with('\n'))
                        out << "\n";
                    out << "\n";
                }
            }
        } else if (serve_cmd->parsed()) {
            return serve(std::move(ws), host, port, out);
        } else if (gc->parsed()) {
            auto reclaimed = ws.collect_garbage();
            if (as_json)
                out << dump({{"reclaimed_blobs", reclaimed}}) << "\n";
            else
                out << "reclaimed " << reclaimed << " blob(s)\n";
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what();
        if (!e.detail().empty())
            err << ": " << e.detail();
        err << "\n";
        return is_user_error(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace evograph
