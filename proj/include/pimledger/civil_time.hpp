// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// UTC conversions between unix seconds and proleptic Gregorian civil time.
// The day arithmetic is the closed-form days-from-civil / civil-from-days
// pair over 400-year eras.

#include <charconv>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "pimledger/error.hpp"

namespace pimledger {

/// Supported unix range is [0, kMaxUnixTime).
inline constexpr std::int64_t kMaxUnixTime = std::int64_t{1} << 40;

struct CivilDateTime {
    std::int64_t year = 1970;
    unsigned month = 1;
    unsigned day = 1;
    unsigned hour = 0;
    unsigned minute = 0;
    unsigned second = 0;

    auto operator<=>(const CivilDateTime&) const = default;
};

constexpr bool is_leap_year(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

constexpr unsigned days_in_month(std::int64_t y, unsigned m) {
    constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return (m == 2 && is_leap_year(y)) ? 29 : kDays[m - 1];
}

// Days since 1970-01-01 for a valid civil date.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);                 // [0, 399]
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;  // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;             // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    std::int64_t year;
    unsigned month;
    unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return {y + (m <= 2), m, d};
}

inline bool is_valid(const CivilDateTime& c) {
    return c.month >= 1 && c.month <= 12 && c.day >= 1 && c.day <= days_in_month(c.year, c.month) && c.hour < 24 &&
           c.minute < 60 && c.second < 60;
}

inline CivilDateTime unix_to_civil(std::int64_t t) {
    if (t < 0 || t >= kMaxUnixTime) fail(Errc::OutOfRange, "unix time " + std::to_string(t) + " outside [0, 2^40)");
    const std::int64_t days = t / 86400;
    const std::int64_t secs = t % 86400;
    const auto date = civil_from_days(days);
    return {date.year,
            date.month,
            date.day,
            static_cast<unsigned>(secs / 3600),
            static_cast<unsigned>(secs / 60 % 60),
            static_cast<unsigned>(secs % 60)};
}

inline std::int64_t civil_to_unix(const CivilDateTime& c) {
    if (!is_valid(c)) fail(Errc::InvalidCivil, "not a valid Gregorian date-time");
    // Bound the year first so the day arithmetic cannot overflow.
    if (c.year < 1970 || c.year > 40000) fail(Errc::OutOfRange, "year " + std::to_string(c.year) + " unsupported");
    const std::int64_t t = days_from_civil(c.year, c.month, c.day) * 86400 + c.hour * 3600 + c.minute * 60 + c.second;
    if (t < 0 || t >= kMaxUnixTime) fail(Errc::OutOfRange, "civil time outside supported unix range");
    return t;
}

namespace detail {

inline void put_digits(std::string& out, std::int64_t v, int width) {
    std::string s = std::to_string(v);
    if (static_cast<int>(s.size()) < width) out.append(width - s.size(), '0');
    out += s;
}

inline bool take_digits(std::string_view text, std::size_t pos, std::size_t n, unsigned& out) {
    if (pos + n > text.size()) return false;
    unsigned v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (text[i] < '0' || text[i] > '9') return false;
        v = v * 10 + static_cast<unsigned>(text[i] - '0');
    }
    out = v;
    return true;
}

}  // namespace detail

/// RFC 5545 UTC form, e.g. 19960918T143000Z. Years must fit in four digits.
inline std::string format_dt(const CivilDateTime& c) {
    if (!is_valid(c)) fail(Errc::InvalidCivil, "not a valid Gregorian date-time");
    if (c.year < 0 || c.year > 9999) fail(Errc::OutOfRange, "year does not fit the basic date-time form");
    std::string out;
    out.reserve(16);
    detail::put_digits(out, c.year, 4);
    detail::put_digits(out, c.month, 2);
    detail::put_digits(out, c.day, 2);
    out += 'T';
    detail::put_digits(out, c.hour, 2);
    detail::put_digits(out, c.minute, 2);
    detail::put_digits(out, c.second, 2);
    out += 'Z';
    return out;
}

inline CivilDateTime parse_dt(std::string_view text) {
    const auto bad = [&] { fail(Errc::MalformedDateTime, "expected YYYYMMDDTHHMMSSZ, got '" + std::string(text) + "'"); };
    if (text.size() != 16 || text[8] != 'T' || text[15] != 'Z') bad();
    unsigned y = 0;
    CivilDateTime c;
    if (!detail::take_digits(text, 0, 4, y) || !detail::take_digits(text, 4, 2, c.month) ||
        !detail::take_digits(text, 6, 2, c.day) || !detail::take_digits(text, 9, 2, c.hour) ||
        !detail::take_digits(text, 11, 2, c.minute) || !detail::take_digits(text, 13, 2, c.second))
        bad();
    c.year = y;
    if (!is_valid(c)) bad();
    return c;
}

inline std::string format_dt(std::int64_t t) { return format_dt(unix_to_civil(t)); }
inline std::int64_t parse_dt_unix(std::string_view text) { return civil_to_unix(parse_dt(text)); }

/// Extended ISO 8601 rendering, e.g. 2020-01-01T00:00:00Z.
inline std::string format_iso8601(std::int64_t t) {
    const auto c = unix_to_civil(t);
    std::string out;
    detail::put_digits(out, c.year, 4);
    out += '-';
    detail::put_digits(out, c.month, 2);
    out += '-';
    detail::put_digits(out, c.day, 2);
    out += 'T';
    detail::put_digits(out, c.hour, 2);
    out += ':';
    detail::put_digits(out, c.minute, 2);
    out += ':';
    detail::put_digits(out, c.second, 2);
    out += 'Z';
    return out;
}

/// Accepts a plain unix integer, YYYY-MM-DD, YYYY-MM-DDTHH:MM, YYYY-MM-DDTHH:MM:SS
/// (optionally Z-suffixed) or the basic RFC 5545 form. All times are UTC.
inline std::int64_t parse_human_time(std::string_view text) {
    const auto bad = [&] { fail(Errc::MalformedDateTime, "unrecognised time '" + std::string(text) + "'"); };
    if (text.empty()) bad();
    if (text.find_first_not_of("0123456789") == std::string_view::npos) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || p != text.data() + text.size()) bad();
        if (v >= kMaxUnixTime) fail(Errc::OutOfRange, "unix time outside [0, 2^40)");
        return v;
    }
    if (text.size() == 16 && text[8] == 'T') return parse_dt_unix(text);

    if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
    unsigned y = 0;
    CivilDateTime c;
    if (text.size() < 10 || !detail::take_digits(text, 0, 4, y) || text[4] != '-' ||
        !detail::take_digits(text, 5, 2, c.month) || text[7] != '-' || !detail::take_digits(text, 8, 2, c.day))
        bad();
    c.year = y;
    if (text.size() > 10) {
        if ((text[10] != 'T' && text[10] != ' ') || text.size() < 16 || !detail::take_digits(text, 11, 2, c.hour) ||
            text[13] != ':' || !detail::take_digits(text, 14, 2, c.minute))
            bad();
        if (text.size() > 16) {
            if (text.size() != 19 || text[16] != ':' || !detail::take_digits(text, 17, 2, c.second)) bad();
        }
    }
    if (!is_valid(c)) fail(Errc::InvalidCivil, "not a valid Gregorian date-time: '" + std::string(text) + "'");
    return civil_to_unix(c);
}

}  // namespace pimledger
