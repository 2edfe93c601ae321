#pragma once

#include "evograph/gateway.hpp"
#include "evograph/workspace.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace evograph {

struct CliContext {
    // Null selects the gateway from the environment.
    AssistantGateway* gateway = nullptr;
    EngineOptions options;
    std::filesystem::path default_root = std::filesystem::current_path();
};

// Runs one command line (without the program name). Returns 0 on success,
// 1 on a user error or bad usage, 2 on an internal error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, CliContext context = {});

} // namespace evograph
