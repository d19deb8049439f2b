// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Blocking client for the gateway API. Connection failures raise
// Errc::Transport; error responses are rethrown with the server's code.

#include <string>

#include <httplib.h>
#include "pimledger/gateway/wire.hpp"

namespace pimledger {

struct HeadInfo {
    std::uint64_t height = 0;
    Digest state_digest{};
    std::optional<std::int64_t> last_timestamp;
    std::uint64_t pending = 0;
    FeeSchedule fees;
    bool dev_mode = false;
};

struct AccountInfo {
    std::uint64_t balance = 0;
    std::uint64_t nonce = 0;
    std::uint64_t next_nonce = 0;
};

struct ContractInfo {
    std::string kind;
    Address owner;
    std::uint64_t storage_bytes = 0;
    std::uint64_t storage_quota = 0;
};

class GatewayClient {
  public:
    explicit GatewayClient(const std::string& base_url) : client_(base_url) {
        client_.set_connection_timeout(5);
        client_.set_read_timeout(30);
    }

    std::string feed(const Address& contract, const Address& user) {
        return get_raw("/feed/" + contract.hex() + "/" + user.hex() + ".ics");
    }

    std::vector<CalendarEvent> events(const Address& contract, const Address& user) {
        return wire::events_from_json(get("/api/events?contract=" + contract.hex() + "&user=" + user.hex()));
    }

    cal_auth::RoleGrant access(const Address& contract, const Address& user) {
        return wire::grant_from_json(get("/api/access?contract=" + contract.hex() + "&user=" + user.hex()));
    }

    std::vector<cal_auth::RoleGrant> grants(const Address& contract) {
        std::vector<cal_auth::RoleGrant> out;
        for (const auto& g : get("/api/grants?contract=" + contract.hex()).at("grants")) out.push_back(wire::grant_from_json(g));
        return out;
    }

    std::vector<msg_time_store::StoredMessage> messages(const Address& contract, const Address& user) {
        std::vector<msg_time_store::StoredMessage> out;
        for (const auto& m : get("/api/messages?contract=" + contract.hex() + "&user=" + user.hex()))
            out.push_back(wire::message_from_json(m));
        return out;
    }

    AccountInfo account(const Address& a) {
        const auto j = get("/api/account?address=" + a.hex());
        return {j.at("balance").get<std::uint64_t>(), j.at("nonce").get<std::uint64_t>(),
                j.at("next_nonce").get<std::uint64_t>()};
    }

    ContractInfo contract(const Address& a) {
        const auto j = get("/api/contract?address=" + a.hex());
        return {j.at("kind").get<std::string>(), wire::address_field(j, "owner"), j.at("storage_bytes").get<std::uint64_t>(),
                j.at("storage_quota").get<std::uint64_t>()};
    }

    HeadInfo head() {
        const auto j = get("/api/head");
        HeadInfo h;
        h.height = j.at("height").get<std::uint64_t>();
        const auto d = from_hex(j.at("state_digest").get<std::string>());
        if (!d || d->size() != h.state_digest.size()) fail(Errc::Malformed, "bad state digest");
        std::copy(d->begin(), d->end(), h.state_digest.begin());
        if (!j["last_timestamp"].is_null()) h.last_timestamp = j["last_timestamp"].get<std::int64_t>();
        h.pending = j.at("pending").get<std::uint64_t>();
        h.fees.write_base = j.at("fees").at("write_base").get<std::uint64_t>();
        h.fees.write_per_byte = j.at("fees").at("write_per_byte").get<std::uint64_t>();
        h.dev_mode = j.value("dev_mode", false);
        return h;
    }

    Bytes query(const Address& contract, const Address& caller, const Call& call) {
        const wire::Json body{{"contract", contract.hex()}, {"caller", caller.hex()}, {"op", call.op}, {"args", to_hex(call.args)}};
        const auto out = from_hex(post("/api/query", body).at("result").get<std::string>());
        if (!out) fail(Errc::Malformed, "bad query result");
        return *out;
    }

    SubmitReceipt submit(const SignedTransaction& tx) {
        const auto j = post("/api/tx", {{"tx", to_hex(tx.encode())}});
        SubmitReceipt r;
        const auto id = from_hex(j.at("id").get<std::string>());
        if (!id || id->size() != r.id.size()) fail(Errc::Malformed, "bad transaction id");
        std::copy(id->begin(), id->end(), r.id.begin());
        r.pool_position = j.at("pool_position").get<std::uint64_t>();
        return r;
    }

    /// Failed transactions come back as a status, not an exception.
    std::optional<TxStatus> status(const TxId& id) {
        auto res = client_.Get("/api/tx/" + to_hex(id));
        if (!res) transport_error(res.error());
        if (res->status == 404) return std::nullopt;
        const auto j = parse(res->body);
        if (res->status != 200 && res->status != 409) raise(res->status, j);
        return wire::status_from_json(j);
    }

    std::uint64_t seal() { return post("/admin/seal", wire::Json::object()).at("height").get<std::uint64_t>(); }

  private:
    [[noreturn]] static void transport_error(httplib::Error e) {
        fail(Errc::Transport, "gateway unreachable: " + httplib::to_string(e));
    }

    static wire::Json parse(const std::string& body) {
        try {
            return wire::Json::parse(body);
        } catch (const nlohmann::json::exception&) {
            fail(Errc::Transport, "gateway sent invalid JSON");
        }
    }

    [[noreturn]] static void raise(int status, const wire::Json& j) {
        const auto code = j.is_object() && j.contains("error")
                              ? errc_from_string(j["error"].get<std::string>()).value_or(Errc::Transport)
                              : Errc::Transport;
        fail(code, j.is_object() ? j.value("message", "HTTP " + std::to_string(status)) : "HTTP " + std::to_string(status));
    }

    std::string get_raw(const std::string& path) {
        auto res = client_.Get(path);
        if (!res) transport_error(res.error());
        if (res->status != 200) raise(res->status, wire::Json::parse(res->body, nullptr, false));
        return res->body;
    }

    wire::Json get(const std::string& path) { return parse(get_raw(path)); }

    wire::Json post(const std::string& path, const wire::Json& body) {
        auto res = client_.Post(path, body.dump(), "application/json");
        if (!res) transport_error(res.error());
        const auto j = wire::Json::parse(res->body, nullptr, false);
        if (res->status / 100 != 2) raise(res->status, j);
        if (j.is_discarded()) fail(Errc::Transport, "gateway sent invalid JSON");
        return j;
    }

    httplib::Client client_;
};

}  // namespace pimledger
