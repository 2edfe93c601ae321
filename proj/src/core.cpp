#include "evograph/core.hpp"
#include "evograph/error.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>
#include <memory>
#include <tuple>

namespace evograph {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Forbidden: return "forbidden";
    case ErrorCode::AlreadyInitialized: return "already_initialized";
    case ErrorCode::Range: return "range";
    case ErrorCode::Integrity: return "integrity";
    case ErrorCode::Corruption: return "corruption";
    case ErrorCode::Io: return "io";
    case ErrorCode::Gateway: return "gateway";
    case ErrorCode::UnsupportedVersion: return "unsupported_version";
    case ErrorCode::Parse: return "parse";
    }
    return "unknown";
}

bool is_user_error(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::Validation:
    case ErrorCode::Forbidden:
    case ErrorCode::AlreadyInitialized:
    case ErrorCode::Range:
        return true;
    default:
        return false;
    }
}

Clock system_clock() {
    return [] { return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now()); };
}

Clock stepping_clock(Timestamp start, std::chrono::milliseconds step) {
    auto next = std::make_shared<Timestamp>(start);
    return [next, step] {
        Timestamp t = *next;
        *next += step;
        return t;
    };
}

std::string format_timestamp(Timestamp t) {
    auto ms = t.time_since_epoch().count();
    auto secs = static_cast<std::time_t>(ms / 1000);
    auto rem = static_cast<int>(ms % 1000);
    if (rem < 0) {
        rem += 1000;
        --secs;
    }
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, rem);
    return buf;
}

Timestamp parse_timestamp(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS.mmmZ
    auto field = [&](std::size_t pos, std::size_t len) {
        int value = 0;
        if (pos + len > text.size())
            throw Error(ErrorCode::Parse, "malformed timestamp", std::string(text));
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, value);
        if (ec != std::errc{} || ptr != text.data() + pos + len)
            throw Error(ErrorCode::Parse, "malformed timestamp", std::string(text));
        return value;
    };
    if (text.size() != 24 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
        text[16] != ':' || text[19] != '.' || text[23] != 'Z')
        throw Error(ErrorCode::Parse, "malformed timestamp", std::string(text));
    std::tm tm{};
    tm.tm_year = field(0, 4) - 1900;
    tm.tm_mon = field(5, 2) - 1;
    tm.tm_mday = field(8, 2);
    tm.tm_hour = field(11, 2);
    tm.tm_min = field(14, 2);
    tm.tm_sec = field(17, 2);
    if (tm.tm_mon < 0 || tm.tm_mon > 11 || tm.tm_mday < 1 || tm.tm_mday > 31 || tm.tm_hour > 23 ||
        tm.tm_min > 59 || tm.tm_sec > 60)
        throw Error(ErrorCode::Parse, "timestamp field out of range", std::string(text));
    auto secs = timegm(&tm);
    return Timestamp{std::chrono::milliseconds{static_cast<std::int64_t>(secs) * 1000 + field(20, 3)}};
}

namespace {

constexpr char kCrockford[] = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";

} // namespace

IdGenerator::IdGenerator(Clock clock, std::uint64_t seed) : clock_(std::move(clock)), rng_(seed) {}

std::string IdGenerator::next() {
    auto now = clock_().time_since_epoch().count();
    auto ms = static_cast<std::uint64_t>(now < 0 ? 0 : now) & 0xFFFFFFFFFFFFull;
    if (ms > last_ms_) {
        last_ms_ = ms;
        rand_hi_ = static_cast<std::uint16_t>(rng_() & 0x7FFF);
        rand_lo_ = rng_();
    } else {
        // Same or earlier millisecond: bump the random part to stay monotonic.
        if (++rand_lo_ == 0)
            ++rand_hi_;
    }

    std::string out(26, '0');
    std::uint64_t t = last_ms_;
    for (int i = 9; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kCrockford[t & 31];
        t >>= 5;
    }
    // 80 random bits -> 16 characters.
    std::uint64_t lo = rand_lo_;
    std::uint64_t hi = rand_hi_;
    for (int i = 25; i >= 10; --i) {
        out[static_cast<std::size_t>(i)] = kCrockford[lo & 31];
        lo = (lo >> 5) | ((hi & 31) << 59);
        hi >>= 5;
    }
    return out;
}

void IdGenerator::observe(std::string_view id) {
    if (id.size() != 26)
        return;
    std::uint64_t ms = 0;
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;
    for (std::size_t i = 0; i < id.size(); ++i) {
        auto pos = std::string_view(kCrockford).find(id[i]);
        if (pos == std::string_view::npos)
            return;
        if (i < 10) {
            ms = (ms << 5) | pos;
        } else {
            hi = (hi << 5) | (lo >> 59);
            lo = (lo << 5) | pos;
        }
    }
    hi &= 0xFFFF;
    auto key = std::tuple(ms, hi, lo);
    if (key > std::tuple(last_ms_, std::uint64_t{rand_hi_}, rand_lo_)) {
        last_ms_ = ms;
        rand_hi_ = static_cast<std::uint16_t>(hi);
        rand_lo_ = lo;
    }
}

} // namespace evograph
