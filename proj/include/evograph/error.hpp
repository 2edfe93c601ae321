#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evograph {

enum class ErrorCode {
    NotFound,
    Validation,
    Forbidden,
    AlreadyInitialized,
    Range,
    Integrity,
    Corruption,
    Io,
    Gateway,
    UnsupportedVersion,
    Parse,
};

std::string_view to_string(ErrorCode code);

// User errors map to CLI exit code 1 and 4xx statuses; the rest are internal.
bool is_user_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string detail = {})
        : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace evograph
