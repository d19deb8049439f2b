// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Time-locked messages. Each sender owns an append-only list; a read returns
// one slot per stored message, with still-locked messages as empty slots
// (id 0) that clients filter out.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pimledger/runtime/host.hpp"

namespace pimledger::msg_time_store {

inline constexpr std::string_view kKind = "msg-time-store";

struct StoredMessage {
    std::uint64_t id = 0;
    std::string body;
    std::int64_t unlock_time = 0;

    bool is_empty_slot() const { return id == 0; }
    bool operator==(const StoredMessage&) const = default;
};

inline void encode(Writer& w, const StoredMessage& m) { w.u64(m.id).str(m.body).i64(m.unlock_time); }

inline StoredMessage decode_message(Reader& r) {
    StoredMessage m;
    m.id = r.u64();
    m.body = r.str();
    m.unlock_time = r.i64();
    return m;
}

inline Bytes encode_messages(const std::vector<StoredMessage>& msgs) {
    Writer w;
    w.count(msgs.size());
    for (const auto& m : msgs) encode(w, m);
    return std::move(w).take();
}

inline std::vector<StoredMessage> decode_messages(ByteView data) {
    Reader r(data);
    const auto n = r.count(20);
    std::vector<StoredMessage> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(decode_message(r));
    r.expect_done();
    return out;
}

inline Call store_msg(std::string_view body, std::int64_t unlock_time) {
    Writer w;
    w.str(body).i64(unlock_time);
    return {"store_msg", std::move(w).take()};
}

inline Call get_msg_timed() { return {"get_msg_timed", {}}; }

inline std::uint64_t decode_id(ByteView result) {
    Reader r(result);
    auto id = r.u64();
    r.expect_done();
    return id;
}

class MsgTimeStore final : public Contract {
  public:
    static constexpr OpSpec kOps[] = {{"store_msg", false}, {"get_msg_timed", true}};

    std::span<const OpSpec> operations() const override { return kOps; }

    Bytes invoke(Host&, const CallContext& ctx, std::string_view op, ByteView args) override {
        Reader r(args);
        if (op == "store_msg") {
            auto body = r.str();
            const auto unlock = r.i64();
            r.expect_done();
            Writer w;
            w.u64(store(ctx, std::move(body), unlock));
            return std::move(w).take();
        }
        r.expect_done();
        return encode_messages(timed(ctx));
    }

    std::uint64_t store(const CallContext& ctx, std::string body, std::int64_t unlock_time) {
        if (body.empty()) fail(Errc::EmptyBody, "message body is empty");
        auto& list = messages_[ctx.msg_sender];
        const std::uint64_t id = list.size() + 1;
        list.push_back({id, std::move(body), unlock_time});
        return id;
    }

    // Released iff block_time >= unlock_time.
    std::vector<StoredMessage> timed(const CallContext& ctx) const {
        auto it = messages_.find(ctx.msg_sender);
        if (it == messages_.end()) return {};
        std::vector<StoredMessage> out(it->second.size());
        for (std::size_t i = 0; i < it->second.size(); ++i)
            if (ctx.block_time >= it->second[i].unlock_time) out[i] = it->second[i];
        return out;
    }

    Bytes encode() const override {
        Writer w;
        w.u8(1).count(messages_.size());
        for (const auto& [sender, list] : messages_) {
            write_address(w, sender);
            w.count(list.size());
            for (const auto& m : list) pimledger::msg_time_store::encode(w, m);
        }
        return std::move(w).take();
    }

    static std::unique_ptr<MsgTimeStore> decode(ByteView storage) {
        Reader r(storage);
        if (r.u8() != 1) fail(Errc::Malformed, "unsupported msg-time-store storage version");
        auto c = std::make_unique<MsgTimeStore>();
        const auto senders = r.count(24);
        for (std::uint32_t i = 0; i < senders; ++i) {
            const auto sender = read_address(r);
            const auto n = r.count(20);
            auto& list = c->messages_[sender];
            for (std::uint32_t j = 0; j < n; ++j) list.push_back(decode_message(r));
        }
        r.expect_done();
        return c;
    }

  private:
    std::map<Address, std::vector<StoredMessage>> messages_;
};

inline ContractKind kind() {
    return {std::string(kKind),
            [](Host&, const CallContext&, const Address&, ByteView init) -> std::unique_ptr<Contract> {
                if (!init.empty()) fail(Errc::Malformed, "msg-time-store takes no init arguments");
                return std::make_unique<MsgTimeStore>();
            },
            [](ByteView storage) -> std::unique_ptr<Contract> { return MsgTimeStore::decode(storage); }};
}

}  // namespace pimledger::msg_time_store
