#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>

namespace evograph {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Clock = std::function<Timestamp()>;

Clock system_clock();

// Deterministic clock for tests and golden runs: start, start+step, ...
Clock stepping_clock(Timestamp start, std::chrono::milliseconds step);

// ISO-8601 UTC with millisecond precision, e.g. 2025-01-01T00:00:00.000Z
std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(std::string_view text);

// String identifier tagged by domain so checkpoint, chat, message and snapshot
// ids cannot be mixed up.
template <typename Tag>
class StrongId {
public:
    StrongId() = default;
    explicit StrongId(std::string value) : value_(std::move(value)) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend auto operator<=>(const StrongId&, const StrongId&) = default;
    friend bool operator==(const StrongId&, const StrongId&) = default;

private:
    std::string value_;
};

using CheckpointId = StrongId<struct CheckpointIdTag>;
using ChatId = StrongId<struct ChatIdTag>;
using MessageId = StrongId<struct MessageIdTag>;
using SnapshotId = StrongId<struct SnapshotIdTag>;
using BlobId = StrongId<struct BlobIdTag>;

// ULID-style identifiers: 48-bit millisecond time + 80 random bits in
// Crockford base32. Ids from one generator are strictly increasing, also
// within a millisecond and when the clock steps backwards.
class IdGenerator {
public:
    IdGenerator(Clock clock, std::uint64_t seed);

    std::string next();
    // Makes later ids sort after `id` (an id from any generator).
    void observe(std::string_view id);
    Timestamp now() const { return clock_(); }

private:
    Clock clock_;
    std::mt19937_64 rng_;
    std::uint64_t last_ms_ = 0;
    std::uint16_t rand_hi_ = 0;
    std::uint64_t rand_lo_ = 0;
};

} // namespace evograph

template <typename Tag>
struct std::hash<evograph::StrongId<Tag>> {
    std::size_t operator()(const evograph::StrongId<Tag>& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
