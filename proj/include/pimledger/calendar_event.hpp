// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pimledger/codec.hpp"

namespace pimledger {

/// A property kept verbatim (already RFC 5545 escaped) because the codec does not model it.
struct Property {
    std::string name;
    std::string value;

    bool operator==(const Property&) const = default;
};

/// One VEVENT. Times are unix seconds, UTC.
struct CalendarEvent {
    std::string uid;
    std::int64_t dtstart = 0;
    std::int64_t dtend = 0;
    std::string summary;
    std::string description;
    std::string organizer;
    std::int64_t dtstamp = 0;
    std::vector<Property> extra;

    bool operator==(const CalendarEvent&) const = default;
};

inline void encode(Writer& w, const CalendarEvent& e) {
    w.str(e.uid).i64(e.dtstart).i64(e.dtend).str(e.summary).str(e.description).str(e.organizer).i64(e.dtstamp);
    w.count(e.extra.size());
    for (const auto& p : e.extra) w.str(p.name).str(p.value);
}

inline CalendarEvent decode_event(Reader& r) {
    CalendarEvent e;
    e.uid = r.str();
    e.dtstart = r.i64();
    e.dtend = r.i64();
    e.summary = r.str();
    e.description = r.str();
    e.organizer = r.str();
    e.dtstamp = r.i64();
    const auto n = r.count(8);
    e.extra.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        Property p;
        p.name = r.str();
        p.value = r.str();
        e.extra.push_back(std::move(p));
    }
    return e;
}

inline Bytes encode_events(const std::vector<CalendarEvent>& events) {
    Writer w;
    w.count(events.size());
    for (const auto& e : events) encode(w, e);
    return std::move(w).take();
}

inline std::vector<CalendarEvent> decode_events(ByteView data) {
    Reader r(data);
    const auto n = r.count(44);
    std::vector<CalendarEvent> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(decode_event(r));
    r.expect_done();
    return out;
}

}  // namespace pimledger
