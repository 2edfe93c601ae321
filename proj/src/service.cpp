#include "evograph/service.hpp"
#include "evograph/compare.hpp"
#include "evograph/error.hpp"
#include "evograph/json_io.hpp"
#include "evograph/provenance.hpp"

#include <httplib.h>

#include <future>

namespace evograph {

int http_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Validation: return 422;
    case ErrorCode::Range: return 422;
    case ErrorCode::Parse: return 400;
    case ErrorCode::Forbidden: return 403;
    case ErrorCode::AlreadyInitialized: return 409;
    case ErrorCode::Gateway: return 502;
    default: return 500;
    }
}

namespace {

using namespace std::chrono_literals;

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

json error_body(std::string_view code, const std::string& message, const std::string& detail) {
    return {{"code", code}, {"message", message}, {"detail", detail}};
}

// Runs a handler body, mapping exceptions to {code, message, detail}.
template <typename Fn>
void respond(httplib::Response& res, Fn&& fn) {
    try {
        res.set_content(fn(), "application/json");
    } catch (const Error& e) {
        res.status = http_status(e.code());
        res.set_content(dump(error_body(to_string(e.code()), e.what(), e.detail())), "application/json");
    } catch (const json::exception& e) {
        res.status = 400;
        res.set_content(dump(error_body("parse", "malformed request body", e.what())), "application/json");
    } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(dump(error_body("internal", "internal error", e.what())), "application/json");
    }
}

json body_of(const httplib::Request& req) {
    if (req.body.empty())
        return json::object();
    auto j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw Error(ErrorCode::Parse, "request body must be a JSON object");
    return j;
}

std::string require_string(const json& body, const char* field) {
    auto it = body.find(field);
    if (it == body.end() || !it->is_string())
        throw Error(ErrorCode::Validation, std::string("missing string field: ") + field);
    return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& body, const char* field) {
    auto it = body.find(field);
    if (it == body.end() || it->is_null())
        return std::nullopt;
    if (!it->is_string())
        throw Error(ErrorCode::Validation, std::string("field must be a string: ") + field);
    return it->get<std::string>();
}

bool optional_bool(const json& body, const char* field) {
    auto it = body.find(field);
    if (it == body.end() || it->is_null())
        return false;
    if (!it->is_boolean())
        throw Error(ErrorCode::Validation, std::string("field must be a boolean: ") + field);
    return it->get<bool>();
}

std::string query(const httplib::Request& req, const char* name) {
    if (!req.has_param(name))
        throw Error(ErrorCode::Validation, std::string("missing query parameter: ") + name);
    return req.get_param_value(name);
}

json checkpoint_json(const DevGraph& graph, const Checkpoint& cp) {
    auto j = to_json(cp);
    j["color"] = color_token(cp.kind);
    j["active"] = cp.id == graph.active();
    return j;
}

json checkpoint_detail(const SessionState& state, const SnapshotStore& store, const CheckpointId& id) {
    const auto& cp = state.graph.at(id);
    auto snap = store.load(cp.snapshot);
    Snapshot parent_snap;
    if (const auto* p = cp.primary_parent())
        parent_snap = store.load(state.graph.at(*p).snapshot);
    else
        parent_snap = snap;
    json files = json::array();
    for (const auto& [path, blob] : snap.entries)
        files.push_back(path);
    auto chat = to_json(state.chats.at(cp.chat));
    chat["id"] = cp.chat.str();
    return {{"checkpoint", checkpoint_json(state.graph, cp)},
            {"chat", chat},
            {"files", files},
            {"parent_diff", to_json(workspace_diff(store, parent_snap, snap))}};
}

std::string sse_frame(const ServiceEvent& e) {
    json ids = e.ids;
    json data{{"seq", e.seq}, {"kind", to_string(e.kind)}, {"ids", ids}};
    return "id: " + std::to_string(e.seq) + "\nevent: " + std::string(to_string(e.kind)) + "\ndata: " + dump(data) +
           "\n\n";
}

} // namespace

Service::Service(Workspace workspace)
    : workspace_(std::move(workspace)),
      read_store_(workspace_.session_dir()),
      server_(std::make_unique<httplib::Server>()) {
    published_ = std::make_shared<const SessionState>(workspace_.state());
    // httplib's default adds SO_REUSEPORT, which would let a second service
    // share the port instead of failing.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    workspace_.set_listener([this](const EngineEvent& e) {
        std::lock_guard lock(mutex_);
        pending_.push_back(e);
    });
    install_routes();
    writer_ = std::thread([this] { writer_loop(); });
}

Service::~Service() {
    stop();
    if (writer_.joinable())
        writer_.join();
}

int Service::bind(const std::string& host, int port) {
    int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound <= 0)
        throw Error(ErrorCode::Io, "cannot listen on address", host + ":" + std::to_string(port));
    return bound;
}

void Service::run() { server_->listen_after_bind(); }

void Service::stop() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    events_cv_.notify_all();
    {
        std::lock_guard lock(queue_mutex_);
    }
    queue_cv_.notify_all();
    server_->stop();
}

std::shared_ptr<const SessionState> Service::state() const {
    std::lock_guard lock(mutex_);
    return published_;
}

std::vector<ServiceEvent> Service::events_since(std::uint64_t seq) const {
    std::lock_guard lock(mutex_);
    if (seq >= events_.size())
        return {};
    return {events_.begin() + static_cast<std::ptrdiff_t>(seq), events_.end()};
}

std::uint64_t Service::last_seq() const {
    std::lock_guard lock(mutex_);
    return seq_;
}

bool Service::review_mode() const {
    std::lock_guard lock(mutex_);
    return review_mode_;
}

void Service::writer_loop() {
    for (;;) {
        std::function<void()> task;
        {
            std::unique_lock lock(queue_mutex_);
            queue_cv_.wait(lock, [this] {
                std::lock_guard state_lock(mutex_);
                return stopping_ || !queue_.empty();
            });
            if (queue_.empty())
                return;
            task = std::move(queue_.front());
            queue_.pop_front();
        }
        task();
    }
}

void Service::publish_locked() {
    published_ = std::make_shared<const SessionState>(workspace_.state());
    for (auto& e : pending_)
        events_.push_back({++seq_, e.kind, std::move(e.ids)});
    pending_.clear();
    events_cv_.notify_all();
}

std::string Service::mutate(std::function<std::string(Workspace&)> fn) {
    auto task = std::make_shared<std::packaged_task<std::string()>>([this, fn = std::move(fn)] {
        struct Publish {
            Service* self;
            ~Publish() {
                std::lock_guard lock(self->mutex_);
                self->publish_locked();
            }
        } publish{this};
        return fn(workspace_);
    });
    auto result = task->get_future();
    {
        std::lock_guard lock(queue_mutex_);
        {
            std::lock_guard state_lock(mutex_);
            if (stopping_)
                throw Error(ErrorCode::Io, "service is shutting down");
        }
        queue_.push_back([task] { (*task)(); });
    }
    queue_cv_.notify_one();
    return result.get();
}

void Service::install_routes() {
    auto& s = *server_;

    s.Get("/graph", [this](const httplib::Request&, httplib::Response& res) {
        respond(res, [&] { return dump(graph_to_json(state()->graph)); });
    });

    s.Get("/checkpoint/:id", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto st = state();
            auto id = resolve_checkpoint(st->graph, req.path_params.at("id"));
            return dump(checkpoint_detail(*st, read_store_, id));
        });
    });

    s.Post("/checkpoint", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto body = body_of(req);
            auto title = optional_string(body, "title");
            auto description = optional_string(body, "description");
            return mutate([&](Workspace& ws) {
                const auto& cp = ws.checkpoint_manual(title, description);
                return dump({{"checkpoint", checkpoint_json(ws.graph(), cp)}});
            });
        });
    });

    s.Post("/prompt", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto body = body_of(req);
            auto text = require_string(body, "text");
            auto include_graph = optional_bool(body, "include_graph");
            return mutate([&](Workspace& ws) {
                auto r = ws.send_prompt(text, include_graph);
                const auto& cp = ws.graph().at(r.checkpoint);
                const auto* reply = ws.state().chats.at(cp.chat).find(r.assistant_message);
                return dump({{"checkpoint", checkpoint_json(ws.graph(), cp)},
                             {"user_message", r.user_message.str()},
                             {"assistant", to_json(*reply)}});
            });
        });
    });

    s.Post("/edit-prompt", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto body = body_of(req);
            auto source = require_string(body, "checkpoint");
            auto message = require_string(body, "message_id");
            auto text = require_string(body, "text");
            auto include_graph = optional_bool(body, "include_graph");
            return mutate([&](Workspace& ws) {
                auto r = ws.edit_prompt(ws.resolve(source), MessageId{message}, text, include_graph);
                const auto& cp = ws.graph().at(r.checkpoint);
                const auto* reply = ws.state().chats.at(cp.chat).find(r.assistant_message);
                return dump({{"checkpoint", checkpoint_json(ws.graph(), cp)},
                             {"user_message", r.user_message.str()},
                             {"assistant", to_json(*reply)}});
            });
        });
    });

    s.Post("/apply", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto body = body_of(req);
            auto message = require_string(body, "message_id");
            auto block = require_string(body, "block_id");
            return mutate([&](Workspace& ws) {
                const auto& cp = ws.apply_code_block(MessageId{message}, block);
                return dump({{"checkpoint", checkpoint_json(ws.graph(), cp)}});
            });
        });
    });

    s.Post("/switch", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto body = body_of(req);
            auto id = require_string(body, "id");
            return mutate([&](Workspace& ws) {
                auto report = ws.switch_to(ws.resolve(id));
                return dump({{"active", ws.graph().active().str()},
                             {"written", report.written},
                             {"deleted", report.deleted}});
            });
        });
    });

    s.Get("/compare", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto st = state();
            auto other = resolve_checkpoint(st->graph, query(req, "other"));
            auto base = req.has_param("base") ? resolve_checkpoint(st->graph, req.get_param_value("base"))
                                              : st->graph.active();
            auto report = compare_checkpoints(*st, read_store_, base, other);
            json only_active = json::array();
            json only_other = json::array();
            for (const auto& m : report.only_active)
                only_active.push_back(to_json(m));
            for (const auto& m : report.only_other)
                only_other.push_back(to_json(m));
            return dump({{"active", report.active.str()},
                         {"other", report.other.str()},
                         {"diff", to_json(report.diff)},
                         {"only_active", only_active},
                         {"only_other", only_other},
                         {"rendered", report.rendered}});
        });
    });

    s.Post("/merge", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto body = body_of(req);
            auto other = require_string(body, "other");
            return mutate([&](Workspace& ws) {
                auto r = ws.merge_with(ws.resolve(other));
                return dump({{"checkpoint", checkpoint_json(ws.graph(), ws.graph().at(r.checkpoint))},
                             {"lca", r.lca.str()},
                             {"conflicted_paths", r.conflicted_paths},
                             {"warnings", r.warnings},
                             {"gateway_failed", r.gateway_failed}});
            });
        });
    });

    s.Delete("/checkpoint/:id", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto raw = req.path_params.at("id");
            return mutate([&](Workspace& ws) {
                auto delta = ws.delete_checkpoint(ws.resolve(raw));
                json reattached = json::array();
                for (const auto& c : delta.reattached)
                    reattached.push_back(c.str());
                return dump({{"removed", delta.removed.str()},
                             {"reattached", reattached},
                             {"new_parent", delta.new_parent.str()},
                             {"active", ws.graph().active().str()},
                             {"active_moved", delta.active_moved}});
            });
        });
    });

    s.Patch("/checkpoint/:id", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto raw = req.path_params.at("id");
            auto body = body_of(req);
            auto title = optional_string(body, "title");
            auto description = optional_string(body, "description");
            return mutate([&](Workspace& ws) {
                const auto& cp = ws.edit_metadata(ws.resolve(raw), title, description);
                return dump({{"checkpoint", checkpoint_json(ws.graph(), cp)}});
            });
        });
    });

    s.Get("/review", [this](const httplib::Request&, httplib::Response& res) {
        respond(res, [&] {
            auto st = state();
            auto pmap = compute_provenance(st->graph, read_store_);
            return dump({{"review_mode", review_mode()},
                         {"provenance", to_json(pmap)},
                         {"summary", to_json(provenance_summary(pmap))}});
        });
    });

    s.Get("/line", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto st = state();
            auto path = query(req, "path");
            std::size_t line = 0;
            try {
                line = std::stoul(query(req, "line"));
            } catch (const std::logic_error&) {
                throw Error(ErrorCode::Validation, "line must be a positive number");
            }
            auto pmap = compute_provenance(st->graph, read_store_);
            auto info = line_info(st->graph, pmap, path, line);
            json j{{"path", path}, {"line", line}, {"unchanged", info.unchanged}};
            if (!info.unchanged) {
                j["checkpoint"] = info.checkpoint.str();
                j["title"] = info.title;
                j["description"] = info.description;
                j["kind"] = to_string(info.kind);
                j["created_at"] = format_timestamp(info.created_at);
                if (info.author) {
                    j["author"] = to_string(*info.author);
                    j["color"] = color_token(*info.author);
                }
            }
            return dump(j);
        });
    });

    s.Post("/review-mode", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto body = body_of(req);
            auto it = body.find("enabled");
            if (it == body.end() || !it->is_boolean())
                throw Error(ErrorCode::Validation, "missing boolean field: enabled");
            bool enabled = it->get<bool>();
            return mutate([&](Workspace&) {
                std::lock_guard lock(mutex_);
                review_mode_ = enabled;
                pending_.push_back({EventKind::ReviewModeToggled, {enabled ? "on" : "off"}});
                return dump({{"review_mode", enabled}});
            });
        });
    });

    s.Get("/file", [this](const httplib::Request& req, httplib::Response& res) {
        respond(res, [&] {
            auto st = state();
            auto id = resolve_checkpoint(st->graph, query(req, "checkpoint"));
            auto path = query(req, "path");
            auto snap = read_store_.load(st->graph.at(id).snapshot);
            auto content = read_store_.read_file(snap, path);
            if (!content)
                throw Error(ErrorCode::NotFound, "file is not part of the checkpoint", path);
            json j{{"checkpoint", id.str()}, {"path", path}, {"binary", is_binary(*content)}};
            j["content"] = is_binary(*content) ? json(nullptr) : json(*content);
            return dump(j);
        });
    });

    s.Get("/events", [this](const httplib::Request& req, httplib::Response& res) {
        std::uint64_t since = last_seq();
        try {
            if (req.has_param("since"))
                since = std::stoull(req.get_param_value("since"));
            else if (req.has_header("Last-Event-ID"))
                since = std::stoull(req.get_header_value("Last-Event-ID"));
        } catch (const std::logic_error&) {
            res.status = 400;
            res.set_content(dump(error_body("validation", "since must be a sequence number", "")), "application/json");
            return;
        }
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider(
            "text/event-stream", [this, next = since](std::size_t, httplib::DataSink& sink) mutable {
                std::vector<ServiceEvent> batch;
                {
                    std::unique_lock lock(mutex_);
                    events_cv_.wait_for(lock, 500ms, [&] { return stopping_ || seq_ > next; });
                    if (stopping_) {
                        sink.done();
                        return false;
                    }
                    for (auto i = next; i < events_.size(); ++i)
                        batch.push_back(events_[i]);
                }
                if (batch.empty()) {
                    std::string ping = ": keep-alive\n\n";
                    return sink.write(ping.data(), ping.size());
                }
                for (const auto& e : batch) {
                    auto frame = sse_frame(e);
                    if (!sink.write(frame.data(), frame.size()))
                        return false;
                    next = e.seq;
                }
                return true;
            });
    });
}

} // namespace evograph
