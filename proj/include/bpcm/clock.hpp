#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace bpcm {

// UTC instant with second precision. Canonical text form is RFC 3339
// "YYYY-MM-DDTHH:MM:SSZ"; parse(to_string(t)) == t for every valid t.
struct Timestamp {
    std::int64_t epoch_seconds = 0;

    static std::optional<Timestamp> parse(std::string_view rfc3339);
    std::string to_string() const;

    auto operator<=>(const Timestamp&) const = default;
};

// Timestamp source. Injected so diffs, commits and reverts are reproducible
// under test and in golden CLI runs.
class Clock {
public:
    virtual ~Clock() = default;
    virtual Timestamp now() = 0;
};

class SystemClock final : public Clock {
public:
    Timestamp now() override;
};

class FixedClock final : public Clock {
public:
    explicit FixedClock(Timestamp instant) : instant_(instant) {}
    Timestamp now() override { return instant_; }

private:
    Timestamp instant_;
};

// Reads the BPCM_NOW environment variable (RFC 3339 instant). Set -> fixed
// clock, unset -> system UTC. Throws Error on an unparseable value.
std::shared_ptr<Clock> clock_from_env();

std::shared_ptr<Clock> system_clock();

// ULID-style identifiers: 26 Crockford base32 chars, 48-bit millisecond
// timestamp followed by 80 bits of entropy. Lexicographic order follows
// creation order within one generator (entropy increments on same-instant
// calls).
class UlidGenerator {
public:
    // Entropy from std::random_device.
    UlidGenerator();
    // Deterministic stream; used when the clock is fixed so repeated runs
    // emit identical identifiers.
    explicit UlidGenerator(std::uint64_t seed);

    std::string next(const Timestamp& at);

private:
    std::mt19937_64 rng_;
    std::uint64_t last_ms_ = static_cast<std::uint64_t>(-1);
    std::array<std::uint8_t, 10> entropy_{};
};

}  // namespace bpcm
