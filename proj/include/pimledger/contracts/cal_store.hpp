// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Per-address calendar storage. Every caller address gets its own event list;
// removal shifts later events down so storage order is stable.

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pimledger/calendar_event.hpp"
#include "pimledger/ical.hpp"
#include "pimledger/runtime/host.hpp"

namespace pimledger::cal_store {

inline constexpr std::string_view kKind = "cal-store";
inline constexpr std::uint64_t kDefaultTextLimit = 2048;

// Argument and result encodings shared with cal-auth, which exposes the same interface.
inline Call store_event(std::int64_t dtstart, std::int64_t dtend, std::string_view summary,
                        std::string_view description) {
    Writer w;
    w.i64(dtstart).i64(dtend).str(summary).str(description);
    return {"store_event", std::move(w).take()};
}
inline Call remove_event(std::string_view uid) {
    Writer w;
    w.str(uid);
    return {"remove_event", std::move(w).take()};
}
inline Call get_events_obj() { return {"get_events_obj", {}}; }
inline Call get_events_ical() { return {"get_events_ical", {}}; }

inline std::string decode_string(ByteView result) {
    Reader r(result);
    auto s = r.str();
    r.expect_done();
    return s;
}
inline bool decode_flag(ByteView result) {
    Reader r(result);
    const bool b = r.boolean();
    r.expect_done();
    return b;
}
inline Bytes encode_string(std::string_view s) {
    Writer w;
    w.str(s);
    return std::move(w).take();
}
inline Bytes encode_flag(bool b) {
    Writer w;
    w.boolean(b);
    return std::move(w).take();
}

inline std::string make_uid(std::uint64_t seq, const Address& owner) {
    return "uid-" + std::to_string(seq) + "@" + owner.hex();
}

class CalStore final : public Contract {
  public:
    static constexpr OpSpec kOps[] = {{"store_event", false},
                                      {"remove_event", false},
                                      {"get_events_obj", true},
                                      {"get_events_ical", true}};

    explicit CalStore(std::uint64_t text_limit = kDefaultTextLimit) : text_limit_(text_limit) {}

    std::span<const OpSpec> operations() const override { return kOps; }

    Bytes invoke(Host&, const CallContext& ctx, std::string_view op, ByteView args) override {
        Reader r(args);
        if (op == "store_event") {
            const auto dtstart = r.i64();
            const auto dtend = r.i64();
            auto summary = r.str();
            auto description = r.str();
            r.expect_done();
            return encode_string(store(ctx, dtstart, dtend, std::move(summary), std::move(description)));
        }
        if (op == "remove_event") {
            const auto uid = r.str();
            r.expect_done();
            remove(ctx, uid);
            return encode_flag(true);
        }
        r.expect_done();
        if (op == "get_events_obj") return encode_events(events_of(ctx.msg_sender));
        return encode_string(ical::serialize(events_of(ctx.msg_sender)));
    }

    std::string store(const CallContext& ctx, std::int64_t dtstart, std::int64_t dtend, std::string summary,
                      std::string description) {
        if (dtend < dtstart) fail(Errc::InvalidRange, "dtend precedes dtstart");
        // Times must be renderable as RFC 5545 date-times.
        if (dtstart < 0 || dtend >= kMaxUnixTime || unix_to_civil(dtend).year > 9999)
            fail(Errc::OutOfRange, "event times outside the supported range");
        if (summary.size() + description.size() > text_limit_)
            fail(Errc::TextTooLong, "summary+description is " + std::to_string(summary.size() + description.size()) +
                                        " bytes, limit " + std::to_string(text_limit_));
        check_text(summary);
        check_text(description);

        auto& owner = owners_[ctx.msg_sender];
        const std::uint64_t seq = ++owner.next_seq;
        CalendarEvent e;
        e.uid = make_uid(seq, ctx.msg_sender);
        e.dtstart = dtstart;
        e.dtend = dtend;
        e.summary = std::move(summary);
        e.description = std::move(description);
        e.organizer = ctx.msg_sender.hex();
        e.dtstamp = ctx.block_time;
        owner.events.push_back(std::move(e));
        return owner.events.back().uid;
    }

    void remove(const CallContext& ctx, std::string_view uid) {
        auto it = owners_.find(ctx.msg_sender);
        if (it != owners_.end()) {
            auto& events = it->second.events;
            auto pos = std::find_if(events.begin(), events.end(), [&](const CalendarEvent& e) { return e.uid == uid; });
            if (pos != events.end()) {
                events.erase(pos);
                return;
            }
        }
        fail(Errc::NotFound, "no event '" + std::string(uid) + "' for " + ctx.msg_sender.hex());
    }

    std::vector<CalendarEvent> events_of(const Address& owner) const {
        auto it = owners_.find(owner);
        return it == owners_.end() ? std::vector<CalendarEvent>{} : it->second.events;
    }

    std::uint64_t text_limit() const { return text_limit_; }

    Bytes encode() const override {
        Writer w;
        w.u8(1).u64(text_limit_).count(owners_.size());
        for (const auto& [addr, owner] : owners_) {
            write_address(w, addr);
            w.u64(owner.next_seq).count(owner.events.size());
            for (const auto& e : owner.events) pimledger::encode(w, e);
        }
        return std::move(w).take();
    }

    static std::unique_ptr<CalStore> decode(ByteView storage) {
        Reader r(storage);
        if (r.u8() != 1) fail(Errc::Malformed, "unsupported cal-store storage version");
        auto c = std::make_unique<CalStore>(r.u64());
        const auto n = r.count(32);
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto addr = read_address(r);
            auto& owner = c->owners_[addr];
            owner.next_seq = r.u64();
            const auto m = r.count(44);
            owner.events.reserve(m);
            for (std::uint32_t j = 0; j < m; ++j) owner.events.push_back(decode_event(r));
        }
        r.expect_done();
        return c;
    }

  private:
    struct OwnerEvents {
        std::uint64_t next_seq = 0;  // last sequence number handed out; never reused
        std::vector<CalendarEvent> events;
    };

    // RFC 5545 TEXT cannot carry control characters other than tab and newline.
    static void check_text(std::string_view s) {
        for (unsigned char c : s)
            if ((c < 0x20 && c != '\n' && c != '\t') || c == 0x7f)
                fail(Errc::Malformed, "control character in event text");
    }

    std::uint64_t text_limit_;
    std::map<Address, OwnerEvents> owners_;
};

/// Init bytes: empty for the default text limit, or a u64 limit.
inline Bytes init_args(std::uint64_t text_limit) {
    Writer w;
    w.u64(text_limit);
    return std::move(w).take();
}

inline ContractKind kind() {
    return {std::string(kKind),
            [](Host&, const CallContext&, const Address&, ByteView init) -> std::unique_ptr<Contract> {
                if (init.empty()) return std::make_unique<CalStore>();
                Reader r(init);
                const auto limit = r.u64();
                r.expect_done();
                return std::make_unique<CalStore>(limit);
            },
            [](ByteView storage) -> std::unique_ptr<Contract> { return CalStore::decode(storage); }};
}

}  // namespace pimledger::cal_store
