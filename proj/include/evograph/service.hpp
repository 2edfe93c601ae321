#pragma once

#include "evograph/error.hpp"
#include "evograph/workspace.hpp"

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace evograph {

struct ServiceEvent {
    std::uint64_t seq = 0;
    EventKind kind = EventKind::GraphChanged;
    std::vector<std::string> ids;
};

// HTTP status for an error code.
int http_status(ErrorCode code);

// Local HTTP+JSON front end of one workspace. A single writer thread runs
// all mutations in arrival order; reads work on the last published state and
// never wait for a running mutation.
class Service {
public:
    explicit Service(Workspace workspace);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Port 0 picks a free port. Returns the bound port; throws Io when the
    // address is unavailable.
    int bind(const std::string& host, int port);
    // Serves until stop(); bind() first.
    void run();
    void stop();

    std::shared_ptr<const SessionState> state() const;
    std::vector<ServiceEvent> events_since(std::uint64_t seq) const;
    std::uint64_t last_seq() const;
    bool review_mode() const;

private:
    void install_routes();
    void writer_loop();
    // Runs fn on the writer thread and waits for its result.
    std::string mutate(std::function<std::string(Workspace&)> fn);
    void publish_locked();

    Workspace workspace_;
    SnapshotStore read_store_;
    std::unique_ptr<httplib::Server> server_;

    mutable std::mutex mutex_;
    std::condition_variable events_cv_;
    std::shared_ptr<const SessionState> published_;
    std::vector<ServiceEvent> events_;
    std::vector<EngineEvent> pending_;
    std::uint64_t seq_ = 0;
    bool review_mode_ = false;
    bool stopping_ = false;

    std::mutex queue_mutex_;
    std::condition_variable queue_cv_;
    std::deque<std::function<void()>> queue_;
    std::thread writer_;
};

} // namespace evograph
