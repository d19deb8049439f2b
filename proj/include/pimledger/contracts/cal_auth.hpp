// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Organisation-owned authorisation proxy in front of a calendar store. It
// exposes the store's four calendar operations unchanged, checks the caller's
// date-ranged grant, and forwards the call under its own address, so the
// organisation's events live in the store under the proxy's account.
//
// Reads return events whose DTSTART falls inside the grant window (or, in
// overlap mode, whose [DTSTART, DTEND] meets it). Writes require WRITE and a
// block time inside the window. The admin role and the owner move together
// through transfer_cal_auth.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pimledger/contracts/cal_store.hpp"
#include "pimledger/runtime/role_set.hpp"

namespace pimledger::cal_auth {

inline constexpr std::string_view kKind = "cal-auth";

enum class AccessLevel : std::uint8_t { None = 0, Read = 1, Write = 2, Admin = 3 };

constexpr std::string_view to_string(AccessLevel l) {
    switch (l) {
        case AccessLevel::None: return "none";
        case AccessLevel::Read: return "read";
        case AccessLevel::Write: return "write";
        case AccessLevel::Admin: return "admin";
    }
    return "none";
}

inline std::optional<AccessLevel> parse_level(std::string_view s) {
    if (s == "none") return AccessLevel::None;
    if (s == "read") return AccessLevel::Read;
    if (s == "write") return AccessLevel::Write;
    if (s == "admin") return AccessLevel::Admin;
    return std::nullopt;
}

enum class FilterMode : std::uint8_t { Dtstart = 0, Overlap = 1 };

/// A window bound of nullopt is open.
struct RoleGrant {
    Address account;
    AccessLevel level = AccessLevel::None;
    std::optional<std::int64_t> not_before;
    std::optional<std::int64_t> not_after;

    bool window_contains(std::int64_t t) const {
        return (!not_before || *not_before <= t) && (!not_after || t <= *not_after);
    }

    bool operator==(const RoleGrant&) const = default;
};

namespace detail {
inline void put_bound(Writer& w, const std::optional<std::int64_t>& b) {
    w.boolean(b.has_value()).i64(b.value_or(0));
}
inline std::optional<std::int64_t> get_bound(Reader& r) {
    const bool has = r.boolean();
    const auto v = r.i64();
    return has ? std::optional<std::int64_t>(v) : std::nullopt;
}
}  // namespace detail

inline void encode(Writer& w, const RoleGrant& g) {
    write_address(w, g.account);
    w.u8(static_cast<std::uint8_t>(g.level));
    detail::put_bound(w, g.not_before);
    detail::put_bound(w, g.not_after);
}

inline RoleGrant decode_grant(Reader& r) {
    RoleGrant g;
    g.account = read_address(r);
    const auto level = r.u8();
    if (level > 3) fail(Errc::Malformed, "bad access level");
    g.level = static_cast<AccessLevel>(level);
    g.not_before = detail::get_bound(r);
    g.not_after = detail::get_bound(r);
    return g;
}

inline RoleGrant decode_grant(ByteView data) {
    Reader r(data);
    auto g = decode_grant(r);
    r.expect_done();
    return g;
}

inline std::vector<RoleGrant> decode_grants(ByteView data) {
    Reader r(data);
    const auto n = r.count(39);
    std::vector<RoleGrant> out;
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(decode_grant(r));
    r.expect_done();
    return out;
}

// Client-side call builders.
inline Call grant_access(const Address& account, AccessLevel level, std::optional<std::int64_t> not_before,
                         std::optional<std::int64_t> not_after) {
    Writer w;
    encode(w, RoleGrant{account, level, not_before, not_after});
    return {"grant_access", std::move(w).take()};
}
inline Call revoke_access(const Address& account) {
    Writer w;
    write_address(w, account);
    return {"revoke_access", std::move(w).take()};
}
inline Call transfer_cal_auth(const Address& new_owner) {
    Writer w;
    write_address(w, new_owner);
    return {"transfer_cal_auth", std::move(w).take()};
}
inline Call user_access_level() { return {"user_access_level", {}}; }
inline Call list_grants() { return {"list_grants", {}}; }
inline Call owner() { return {"owner", {}}; }
inline Call has_role(const RoleId& role, const Address& account) {
    Writer w;
    w.str(role);
    write_address(w, account);
    return {"has_role", std::move(w).take()};
}

inline Address decode_address(ByteView data) {
    Reader r(data);
    auto a = read_address(r);
    r.expect_done();
    return a;
}

inline Bytes init_args(const Address& store, FilterMode mode = FilterMode::Dtstart) {
    Writer w;
    write_address(w, store);
    w.u8(static_cast<std::uint8_t>(mode));
    return std::move(w).take();
}

class CalAuth final : public Contract {
  public:
    static constexpr OpSpec kOps[] = {
        {"store_event", false},     {"remove_event", false},  {"get_events_obj", true},
        {"get_events_ical", true},  {"grant_access", false},  {"revoke_access", false},
        {"transfer_cal_auth", false}, {"user_access_level", true}, {"list_grants", true},
        {"owner", true},            {"has_role", true},
    };

    CalAuth(const Address& store, FilterMode mode, RoleSet roles)
        : store_(store), mode_(mode), roles_(std::move(roles)) {}

    std::span<const OpSpec> operations() const override { return kOps; }

    Bytes invoke(Host& host, const CallContext& ctx, std::string_view op, ByteView args) override {
        const Address self = host.self();
        Reader r(args);
        if (op == "store_event" || op == "remove_event") {
            require_write(ctx);
            return host.call_from(self, ctx, store_, op, args);
        }
        if (op == "get_events_obj" || op == "get_events_ical") {
            r.expect_done();
            const auto grant = effective_grant(ctx.msg_sender);
            if (grant.level < AccessLevel::Read) fail(Errc::AccessDenied, ctx.msg_sender.hex() + " has no read access");
            auto events = decode_events(host.call_from(self, ctx, store_, "get_events_obj", {}));
            std::erase_if(events, [&](const CalendarEvent& e) { return !visible(grant, e); });
            if (op == "get_events_obj") return encode_events(events);
            return cal_store::encode_string(ical::serialize(events));
        }
        if (op == "grant_access") {
            auto g = decode_grant(r);
            r.expect_done();
            grant(ctx, std::move(g));
            return {};
        }
        if (op == "revoke_access") {
            const auto account = read_address(r);
            r.expect_done();
            revoke(ctx, account);
            return {};
        }
        if (op == "transfer_cal_auth") {
            const auto new_owner = read_address(r);
            r.expect_done();
            transfer(host, self, ctx, new_owner);
            return {};
        }
        if (op == "user_access_level") {
            r.expect_done();
            Writer w;
            cal_auth::encode(w, effective_grant(ctx.msg_sender));
            return std::move(w).take();
        }
        if (op == "list_grants") {
            r.expect_done();
            Writer w;
            w.count(grants_.size());
            for (const auto& [_, g] : grants_) cal_auth::encode(w, g);
            return std::move(w).take();
        }
        if (op == "owner") {
            r.expect_done();
            Writer w;
            write_address(w, host.owner_of(self));
            return std::move(w).take();
        }
        // has_role
        const auto role = r.str();
        const auto account = read_address(r);
        r.expect_done();
        return cal_store::encode_flag(roles_.has_role(role, account));
    }

    /// The caller's grant; admin-role members report AccessLevel::Admin with an open window.
    RoleGrant effective_grant(const Address& account) const {
        if (roles_.has_role(kDefaultAdminRole, account)) return {account, AccessLevel::Admin, std::nullopt, std::nullopt};
        auto it = grants_.find(account);
        return it == grants_.end() ? RoleGrant{account, AccessLevel::None, std::nullopt, std::nullopt} : it->second;
    }

    bool visible(const RoleGrant& g, const CalendarEvent& e) const {
        if (mode_ == FilterMode::Dtstart) return g.window_contains(e.dtstart);
        return (!g.not_before || e.dtend >= *g.not_before) && (!g.not_after || e.dtstart <= *g.not_after);
    }

    void grant(const CallContext& ctx, RoleGrant g) {
        require_admin(ctx);
        if (g.level != AccessLevel::Read && g.level != AccessLevel::Write)
            fail(Errc::Malformed, "grants must be read or write");
        if (g.not_before && g.not_after && *g.not_before > *g.not_after)
            fail(Errc::InvalidWindow, "not_before is after not_after");
        const auto account = g.account;
        grants_.insert_or_assign(account, std::move(g));
    }

    void revoke(const CallContext& ctx, const Address& account) {
        require_admin(ctx);
        grants_.erase(account);
    }

    void transfer(Host& host, const Address& self, const CallContext& ctx, const Address& new_owner) {
        only_owner_guard(ctx, host.record(self));
        if (new_owner == ctx.msg_sender) return;
        roles_.grant_role(ctx, kDefaultAdminRole, new_owner);
        roles_.revoke_role(ctx, kDefaultAdminRole, ctx.msg_sender);
        host.set_owner(self, new_owner);
    }

    const RoleSet& roles() const { return roles_; }
    const Address& store() const { return store_; }

    Bytes encode() const override {
        Writer w;
        w.u8(1);
        write_address(w, store_);
        w.u8(static_cast<std::uint8_t>(mode_));
        roles_.encode(w);
        w.count(grants_.size());
        for (const auto& [_, g] : grants_) pimledger::cal_auth::encode(w, g);
        return std::move(w).take();
    }

    static std::unique_ptr<CalAuth> decode(ByteView storage) {
        Reader r(storage);
        if (r.u8() != 1) fail(Errc::Malformed, "unsupported cal-auth storage version");
        const auto store = read_address(r);
        const auto mode = r.u8();
        if (mode > 1) fail(Errc::Malformed, "bad filter mode");
        auto roles = RoleSet::decode(r);
        auto c = std::make_unique<CalAuth>(store, static_cast<FilterMode>(mode), std::move(roles));
        const auto n = r.count(39);
        for (std::uint32_t i = 0; i < n; ++i) {
            auto g = decode_grant(r);
            const auto account = g.account;
            c->grants_.emplace(account, std::move(g));
        }
        r.expect_done();
        return c;
    }

  private:
    void require_admin(const CallContext& ctx) const {
        if (!roles_.has_role(kDefaultAdminRole, ctx.msg_sender))
            fail(Errc::AccessDenied, ctx.msg_sender.hex() + " is not an administrator");
    }

    void require_write(const CallContext& ctx) const {
        const auto g = effective_grant(ctx.msg_sender);
        if (g.level < AccessLevel::Write) fail(Errc::AccessDenied, ctx.msg_sender.hex() + " has no write access");
        if (!g.window_contains(ctx.block_time))
            fail(Errc::AccessDenied, ctx.msg_sender.hex() + " write window does not cover block time");
    }

    Address store_;
    FilterMode mode_;
    RoleSet roles_;
    std::map<Address, RoleGrant> grants_;
};

inline ContractKind kind() {
    return {std::string(kKind),
            [](Host& host, const CallContext& ctx, const Address&, ByteView init) -> std::unique_ptr<Contract> {
                Reader r(init);
                const auto store = read_address(r);
                const auto mode = r.done() ? 0 : r.u8();
                r.expect_done();
                if (mode > 1) fail(Errc::Malformed, "bad filter mode");
                host.record(store);  // the bound store must already exist
                return std::make_unique<CalAuth>(store, static_cast<FilterMode>(mode), RoleSet::with_admin(ctx.origin));
            },
            [](ByteView storage) -> std::unique_ptr<Contract> { return CalAuth::decode(storage); }};
}

}  // namespace pimledger::cal_auth
