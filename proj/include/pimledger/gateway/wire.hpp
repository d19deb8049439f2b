// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON shapes shared by the gateway and its clients. Times are unix seconds,
// addresses are 0x-prefixed lowercase hex, binary values are lowercase hex.

#include <json.hpp>
#include "pimledger/calendar_event.hpp"
#include "pimledger/contracts/cal_auth.hpp"
#include "pimledger/contracts/msg_time_store.hpp"
#include "pimledger/ledger/ledger.hpp"

namespace pimledger::wire {

using Json = nlohmann::ordered_json;

inline Address address_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) fail(Errc::Malformed, std::string("missing address field ") + key);
    auto a = Address::parse(j[key].get<std::string>());
    if (!a) fail(Errc::Malformed, std::string("bad address in ") + key);
    return *a;
}

inline Json to_json(const CalendarEvent& e) {
    Json j{{"uid", e.uid},           {"dtstart", e.dtstart},         {"dtend", e.dtend},
           {"summary", e.summary},   {"description", e.description}, {"organizer", e.organizer},
           {"dtstamp", e.dtstamp}};
    if (!e.extra.empty()) {
        auto& x = j["extra"] = Json::array();
        for (const auto& p : e.extra) x.push_back({{"name", p.name}, {"value", p.value}});
    }
    return j;
}

inline CalendarEvent event_from_json(const Json& j) {
    CalendarEvent e;
    try {
        e.uid = j.at("uid").get<std::string>();
        e.dtstart = j.at("dtstart").get<std::int64_t>();
        e.dtend = j.at("dtend").get<std::int64_t>();
        e.summary = j.at("summary").get<std::string>();
        e.description = j.at("description").get<std::string>();
        e.organizer = j.at("organizer").get<std::string>();
        e.dtstamp = j.at("dtstamp").get<std::int64_t>();
        if (j.contains("extra"))
            for (const auto& p : j["extra"]) e.extra.push_back({p.at("name").get<std::string>(), p.at("value").get<std::string>()});
    } catch (const nlohmann::json::exception& ex) {
        fail(Errc::Malformed, std::string("event json: ") + ex.what());
    }
    return e;
}

inline Json to_json(const std::vector<CalendarEvent>& events) {
    Json a = Json::array();
    for (const auto& e : events) a.push_back(to_json(e));
    return a;
}

inline std::vector<CalendarEvent> events_from_json(const Json& j) {
    if (!j.is_array()) fail(Errc::Malformed, "expected an event array");
    std::vector<CalendarEvent> out;
    for (const auto& e : j) out.push_back(event_from_json(e));
    return out;
}

inline Json bound(const std::optional<std::int64_t>& b) { return b ? Json(*b) : Json(nullptr); }

inline std::optional<std::int64_t> bound_from(const Json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<std::int64_t>();
}

inline Json to_json(const cal_auth::RoleGrant& g) {
    return {{"account", g.account.hex()},
            {"level", cal_auth::to_string(g.level)},
            {"not_before", bound(g.not_before)},
            {"not_after", bound(g.not_after)}};
}

inline cal_auth::RoleGrant grant_from_json(const Json& j) {
    cal_auth::RoleGrant g;
    try {
        g.account = address_field(j, "account");
        const auto level = cal_auth::parse_level(j.at("level").get<std::string>());
        if (!level) fail(Errc::Malformed, "unknown access level");
        g.level = *level;
        g.not_before = bound_from(j, "not_before");
        g.not_after = bound_from(j, "not_after");
    } catch (const nlohmann::json::exception& ex) {
        fail(Errc::Malformed, std::string("grant json: ") + ex.what());
    }
    return g;
}

inline Json to_json(const msg_time_store::StoredMessage& m) {
    return {{"id", m.id}, {"body", m.body}, {"unlock_time", m.unlock_time}, {"empty", m.is_empty_slot()}};
}

inline msg_time_store::StoredMessage message_from_json(const Json& j) {
    try {
        return {j.at("id").get<std::uint64_t>(), j.at("body").get<std::string>(), j.at("unlock_time").get<std::int64_t>()};
    } catch (const nlohmann::json::exception& ex) {
        fail(Errc::Malformed, std::string("message json: ") + ex.what());
    }
}

inline Json to_json(const TxId& id, const TxStatus& st) {
    Json j{{"id", to_hex(id)}, {"status", to_string(st.outcome)}, {"pool_position", st.pool_position}};
    if (st.height) {
        j["height"] = *st.height;
        j["index"] = st.index;
        j["fee"] = st.fee;
        j["result"] = to_hex(st.result);
    }
    if (st.error) {
        j["error"] = to_string(*st.error);
        j["message"] = st.message;
    }
    if (st.created) j["created"] = st.created->hex();
    return j;
}

inline TxStatus status_from_json(const Json& j) {
    TxStatus st;
    try {
        const auto s = j.at("status").get<std::string>();
        st.outcome = s == "included" ? TxOutcome::Succeeded : s == "failed" ? TxOutcome::Failed : TxOutcome::Pending;
        st.pool_position = j.value("pool_position", std::uint64_t{0});
        if (j.contains("height")) {
            st.height = j["height"].get<std::uint64_t>();
            st.index = j.value("index", std::uint32_t{0});
            st.fee = j.value("fee", std::uint64_t{0});
            st.result = from_hex(j.value("result", std::string())).value_or(Bytes{});
        }
        if (j.contains("error")) {
            st.error = errc_from_string(j["error"].get<std::string>()).value_or(Errc::Malformed);
            st.message = j.value("message", std::string());
        }
        if (j.contains("created")) st.created = address_field(j, "created");
    } catch (const nlohmann::json::exception& ex) {
        fail(Errc::Malformed, std::string("status json: ") + ex.what());
    }
    return st;
}

inline Json error_json(Errc code, std::string_view message) {
    return {{"error", to_string(code)}, {"message", message}};
}

}  // namespace pimledger::wire
