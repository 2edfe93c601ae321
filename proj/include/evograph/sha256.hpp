#pragma once

#include <string>
#include <string_view>

namespace evograph {

// Lowercase hex SHA-256 digest of raw bytes.
std::string sha256_hex(std::string_view bytes);

} // namespace evograph
