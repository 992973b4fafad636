#include "bpcm/clock.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>

#include "bpcm/errors.hpp"

namespace bpcm {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// civil-days algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool is_leap(std::int64_t y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
    static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) {
        return 29;
    }
    return kDays[m - 1];
}

bool parse_digits(std::string_view text, std::size_t pos, std::size_t count, std::int64_t& out) {
    if (pos + count > text.size()) {
        return false;
    }
    std::int64_t value = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const char c = text[pos + i];
        if (c < '0' || c > '9') {
            return false;
        }
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

}  // namespace

std::optional<Timestamp> Timestamp::parse(std::string_view text) {
    // Strict form: YYYY-MM-DDTHH:MM:SSZ
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
        return std::nullopt;
    }
    std::int64_t year, month, day, hour, minute, second;
    if (!parse_digits(text, 0, 4, year) || !parse_digits(text, 5, 2, month) ||
        !parse_digits(text, 8, 2, day) || !parse_digits(text, 11, 2, hour) ||
        !parse_digits(text, 14, 2, minute) || !parse_digits(text, 17, 2, second)) {
        return std::nullopt;
    }
    if (month < 1 || month > 12 || day < 1 ||
        day > days_in_month(year, static_cast<unsigned>(month)) || hour > 23 || minute > 59 ||
        second > 59) {
        return std::nullopt;
    }
    const std::int64_t days =
        days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    return Timestamp{days * 86400 + hour * 3600 + minute * 60 + second};
}

std::string Timestamp::to_string() const {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    std::int64_t year;
    unsigned month, day;
    civil_from_days(days, year, month, day);
    const auto hour = static_cast<unsigned>(rem / 3600);
    const auto minute = static_cast<unsigned>((rem % 3600) / 60);
    const auto second = static_cast<unsigned>(rem % 60);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02u:%02u:%02uZ",
                  static_cast<long long>(year), month, day, hour, minute, second);
    return buf;
}

Timestamp SystemClock::now() {
    const auto now = std::chrono::system_clock::now();
    return Timestamp{std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
                         .count()};
}

std::shared_ptr<Clock> system_clock() {
    return std::make_shared<SystemClock>();
}

std::shared_ptr<Clock> clock_from_env() {
    const char* value = std::getenv("BPCM_NOW");
    if (value == nullptr || *value == '\0') {
        return system_clock();
    }
    const auto parsed = Timestamp::parse(value);
    if (!parsed) {
        throw Error(std::string("BPCM_NOW is not an RFC 3339 UTC instant: ") + value);
    }
    return std::make_shared<FixedClock>(*parsed);
}

namespace {

constexpr char kCrockford[] = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";

std::uint64_t random_seed() {
    std::random_device device;
    std::uint64_t seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
    seed ^= static_cast<std::uint64_t>(
        std::chrono::steady_clock::now().time_since_epoch().count());
    return seed;
}

}  // namespace

UlidGenerator::UlidGenerator() : rng_(random_seed()) {}

UlidGenerator::UlidGenerator(std::uint64_t seed) : rng_(seed) {}

std::string UlidGenerator::next(const Timestamp& at) {
    const auto ms = static_cast<std::uint64_t>(at.epoch_seconds) * 1000ULL;
    if (ms == last_ms_) {
        // Same instant: increment the entropy block so ids stay ordered.
        for (int i = 9; i >= 0; --i) {
            if (++entropy_[static_cast<std::size_t>(i)] != 0) {
                break;
            }
        }
    } else {
        last_ms_ = ms;
        std::uint64_t a = rng_();
        std::uint64_t b = rng_();
        for (std::size_t i = 0; i < 8; ++i) {
            entropy_[i] = static_cast<std::uint8_t>(a >> (8 * i));
        }
        entropy_[8] = static_cast<std::uint8_t>(b);
        entropy_[9] = static_cast<std::uint8_t>(b >> 8);
    }

    // 10 chars for the 48-bit time (top bits zero-padded), 16 for the 80-bit
    // entropy, most significant group first.
    std::string out(26, '0');
    for (int i = 0; i < 10; ++i) {
        out[static_cast<std::size_t>(i)] = kCrockford[(ms >> (45 - 5 * i)) & 0x1F];
    }
    unsigned __int128 entropy = 0;
    for (const std::uint8_t byte : entropy_) {
        entropy = (entropy << 8) | byte;
    }
    for (int i = 0; i < 16; ++i) {
        out[static_cast<std::size_t>(10 + i)] =
            kCrockford[static_cast<unsigned>((entropy >> (75 - 5 * i)) & 0x1F)];
    }
    return out;
}

}  // namespace bpcm
