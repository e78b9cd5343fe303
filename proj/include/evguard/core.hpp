#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace evguard {

/// Number of half-hour reporting slots in one EV-day.
inline constexpr std::size_t kSlotsPerDay = 48;
inline constexpr int kMinutesPerDay = 1440;
inline constexpr int kMinutesPerSlot = 30;

using SocSeries = std::array<double, kSlotsPerDay>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text; carries the 1-based line (or row) number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// NaN/Inf produced during numeric work (e.g. a diverging training run).
class NumericError : public Error {
public:
    using Error::Error;
};

/// A metric whose denominator is zero for the given counts.
class UndefinedMetric : public Error {
public:
    explicit UndefinedMetric(std::string metric)
        : Error("metric " + metric + " is undefined (zero denominator)"), metric_(std::move(metric)) {}
    const std::string& metric() const noexcept { return metric_; }

private:
    std::string metric_;
};

enum class Label { Honest = 0, Lying = 1 };

inline std::string_view to_string(Label l) { return l == Label::Honest ? "honest" : "lying"; }

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

/// Fixed-point text with `decimals` digits, the format used by every CSV artifact.
inline std::string fixed(double v, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

/// Shortest text that parses back to exactly `v`.
inline std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace evguard
