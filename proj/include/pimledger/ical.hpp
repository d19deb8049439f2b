// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Minimal RFC 5545 writer and subset reader: one VCALENDAR holding VEVENTs
// with DTSTAMP, UID, ORGANIZER, DTSTART, DTEND, SUMMARY and DESCRIPTION.
// Output uses CRLF and folds lines at 75 octets. Other VEVENT properties are
// carried through untouched. All times are UTC.

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pimledger/calendar_event.hpp"
#include "pimledger/civil_time.hpp"
#include "pimledger/error.hpp"

namespace pimledger::ical {

inline constexpr std::string_view kProdId = "-//pimledger//Ledger Calendar 1.0//EN";
inline constexpr std::size_t kFoldOctets = 75;

struct Document {
    std::string prodid{kProdId};
    std::string version = "2.0";
    std::vector<CalendarEvent> events;

    bool operator==(const Document&) const = default;
};

/// Equality ignoring PRODID.
inline bool same_content(const Document& a, const Document& b) {
    return a.version == b.version && a.events == b.events;
}

inline std::string escape_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case ';': out += "\\;"; break;
            case ',': out += "\\,"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string unescape_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i == s.size()) fail(Errc::MalformedDocument, "dangling backslash in TEXT value");
        switch (s[i]) {
            case '\\': out += '\\'; break;
            case ';': out += ';'; break;
            case ',': out += ','; break;
            case 'n':
            case 'N': out += '\n'; break;
            default: fail(Errc::MalformedDocument, std::string("invalid TEXT escape \\") + s[i]);
        }
    }
    return out;
}

// Appends one content line, folded so no physical line exceeds kFoldOctets
// octets. Breaks never fall inside a UTF-8 sequence.
inline void append_folded(std::string& out, std::string_view line) {
    std::size_t limit = kFoldOctets;
    while (line.size() > limit) {
        std::size_t cut = limit;
        while (cut > 0 && (static_cast<unsigned char>(line[cut]) & 0xC0) == 0x80) --cut;
        if (cut == 0) cut = limit;  // not UTF-8; split on the octet boundary
        out.append(line.substr(0, cut));
        out += "\r\n ";
        line.remove_prefix(cut);
        limit = kFoldOctets - 1;
    }
    out.append(line);
    out += "\r\n";
}

inline std::string serialize(const Document& doc) {
    std::string out;
    const auto prop = [&out](std::string_view name, std::string_view value) {
        std::string line;
        line.reserve(name.size() + 1 + value.size());
        line.append(name).append(":").append(value);
        append_folded(out, line);
    };
    prop("BEGIN", "VCALENDAR");
    prop("PRODID", escape_text(doc.prodid));
    prop("VERSION", doc.version);
    for (const auto& e : doc.events) {
        prop("BEGIN", "VEVENT");
        prop("DTSTAMP", format_dt(e.dtstamp));
        prop("UID", escape_text(e.uid));
        prop("ORGANIZER", e.organizer);
        prop("DTSTART", format_dt(e.dtstart));
        prop("DTEND", format_dt(e.dtend));
        for (const auto& p : e.extra) prop(p.name, p.value);
        prop("SUMMARY", escape_text(e.summary));
        prop("DESCRIPTION", escape_text(e.description));
        prop("END", "VEVENT");
    }
    prop("END", "VCALENDAR");
    return out;
}

inline std::string serialize(const std::vector<CalendarEvent>& events) {
    Document doc;
    doc.events = events;
    return serialize(doc);
}

namespace detail {

inline std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

// Splits on LF (CRLF tolerated) and joins continuation lines.
inline std::vector<std::string> unfold(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (!raw.empty() && (raw.front() == ' ' || raw.front() == '\t')) {
            if (lines.empty()) fail(Errc::MalformedDocument, "continuation line before any content line");
            lines.back().append(raw.substr(1));
            continue;
        }
        lines.emplace_back(raw);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

}  // namespace detail

inline Document parse(std::string_view text) {
    Document doc;
    doc.prodid.clear();
    const auto lines = detail::unfold(text);
    if (lines.empty() || detail::upper(lines.front()) != "BEGIN:VCALENDAR")
        fail(Errc::MalformedDocument, "document must start with BEGIN:VCALENDAR");

    bool calendar_open = true;
    bool calendar_closed = false;
    std::optional<CalendarEvent> current;
    bool seen_uid = false, seen_dtstamp = false, seen_dtstart = false, seen_dtend = false;
    std::vector<std::string> seen;

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (calendar_closed) fail(Errc::MalformedDocument, "content after END:VCALENDAR");
        const auto colon = line.find(':');
        if (colon == std::string::npos || colon == 0)
            fail(Errc::MalformedDocument, "line " + std::to_string(i + 1) + " is not NAME:VALUE");
        const std::string name = detail::upper(std::string_view(line).substr(0, colon));
        const std::string_view value = std::string_view(line).substr(colon + 1);

        if (name == "BEGIN") {
            if (detail::upper(value) != "VEVENT")
                fail(Errc::MalformedDocument, "unsupported component " + std::string(value));
            if (current) fail(Errc::MalformedDocument, "nested BEGIN:VEVENT");
            current.emplace();
            seen_uid = seen_dtstamp = seen_dtstart = seen_dtend = false;
            seen.clear();
            continue;
        }
        if (name == "END") {
            const auto comp = detail::upper(value);
            if (comp == "VEVENT") {
                if (!current) fail(Errc::MalformedDocument, "END:VEVENT without BEGIN:VEVENT");
                if (!seen_uid || !seen_dtstamp || !seen_dtstart)
                    fail(Errc::MalformedDocument, "VEVENT lacks UID, DTSTAMP or DTSTART");
                if (!seen_dtend) current->dtend = current->dtstart;
                doc.events.push_back(std::move(*current));
                current.reset();
            } else if (comp == "VCALENDAR") {
                if (current) fail(Errc::MalformedDocument, "END:VCALENDAR inside an open VEVENT");
                calendar_open = false;
                calendar_closed = true;
            } else {
                fail(Errc::MalformedDocument, "END of unsupported component " + std::string(value));
            }
            continue;
        }

        if (!current) {
            if (name == "PRODID") doc.prodid = unescape_text(value);
            else if (name == "VERSION") doc.version = std::string(value);
            continue;
        }

        static constexpr std::string_view kKnown[] = {"DTSTAMP", "UID",     "ORGANIZER",  "DTSTART",
                                                        "DTEND",   "SUMMARY", "DESCRIPTION"};
        if (std::find(std::begin(kKnown), std::end(kKnown), name) != std::end(kKnown)) {
            if (std::find(seen.begin(), seen.end(), name) != seen.end())
                fail(Errc::MalformedDocument, "duplicate " + name + " in VEVENT");
            seen.push_back(name);
        }
        if (name == "DTSTAMP") current->dtstamp = parse_dt_unix(value), seen_dtstamp = true;
        else if (name == "UID") current->uid = unescape_text(value), seen_uid = true;
        else if (name == "ORGANIZER") current->organizer = std::string(value);
        else if (name == "DTSTART") current->dtstart = parse_dt_unix(value), seen_dtstart = true;
        else if (name == "DTEND") current->dtend = parse_dt_unix(value), seen_dtend = true;
        else if (name == "SUMMARY") current->summary = unescape_text(value);
        else if (name == "DESCRIPTION") current->description = unescape_text(value);
        else current->extra.push_back({line.substr(0, colon), std::string(value)});
    }
    if (current) fail(Errc::MalformedDocument, "missing END:VEVENT");
    if (calendar_open) fail(Errc::MalformedDocument, "missing END:VCALENDAR");
    return doc;
}

}  // namespace pimledger::ical
