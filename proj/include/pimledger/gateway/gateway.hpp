// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// HTTP bridge between calendar clients, the web UI, the CLI and a node. It
// holds no keys and no state of its own: reads are fee-free ledger queries and
// writes are client-signed transactions forwarded to the sequencer.
//
// The ics feed is keyed by address alone. Anyone who knows a user's address
// can read that user's calendar through it.

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include <httplib.h>
#include "pimledger/contracts/cal_store.hpp"
#include "pimledger/gateway/wire.hpp"
#include "pimledger/ical.hpp"
#include "pimledger/node.hpp"

namespace pimledger {

struct GatewayOptions {
    bool dev_mode = false;        // enables POST /admin/seal
    std::string cors_origin = "*";
};

inline int http_status(Errc code) {
    switch (code) {
        case Errc::Malformed:
        case Errc::UnknownKind:
        case Errc::UnknownOperation:
        case Errc::OutOfRange:
            return 400;
        case Errc::AccessDenied: return 403;
        case Errc::UnknownContract:
        case Errc::NotFound:
            return 404;
        case Errc::BadSignature:
        case Errc::BadNonce:
        case Errc::InsufficientBalance:
            return 422;
        case Errc::NonMonotonicTimestamp: return 409;
        default: return 500;
    }
}

class Gateway {
  public:
    Gateway(Node& node, GatewayOptions options = {}) : node_(node), options_(std::move(options)) { routes(); }

    ~Gateway() { stop(); }

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    httplib::Server& server() { return server_; }

    /// Binds and serves on a background thread; returns the bound port.
    int start(const std::string& host = "127.0.0.1", int port = 0) {
        const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
        if (bound < 0) fail(Errc::Io, "cannot bind " + host + ":" + std::to_string(port));
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        return bound;
    }

    /// Serves on the calling thread until stop().
    void listen(const std::string& host, int port) {
        if (!server_.listen(host, port)) fail(Errc::Io, "cannot listen on " + host + ":" + std::to_string(port));
    }

    void stop() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

  private:
    using Req = httplib::Request;
    using Res = httplib::Response;

    static void send_json(Res& res, const wire::Json& j, int status = 200) {
        res.status = status;
        res.set_content(j.dump(), "application/json");
    }

    static void send_error(Res& res, Errc code, std::string_view message) {
        send_json(res, wire::error_json(code, message), http_status(code));
    }

    template <class Fn>
    auto guarded(Fn fn) {
        return [fn = std::move(fn)](const Req& req, Res& res) {
            try {
                fn(req, res);
            } catch (const Error& e) {
                send_error(res, e.code(), e.detail());
            } catch (const nlohmann::json::exception& e) {
                send_error(res, Errc::Malformed, e.what());
            } catch (const std::exception& e) {
                send_json(res, wire::error_json(Errc::Io, e.what()), 500);
            }
        };
    }

    static Address address_arg(std::string_view text, std::string_view what) {
        auto a = Address::parse(text);
        if (!a) fail(Errc::Malformed, "malformed " + std::string(what) + " address");
        return *a;
    }

    static Address param(const Req& req, const char* name) {
        if (!req.has_param(name)) fail(Errc::Malformed, std::string("missing query parameter ") + name);
        return address_arg(req.get_param_value(name), name);
    }

    Bytes query(const Address& contract, const Address& user, const Call& call) const {
        return node_.ledger().query(contract, user, call);
    }

    void routes() {
        server_.set_default_headers({{"Access-Control-Allow-Origin", options_.cors_origin},
                                     {"Access-Control-Allow-Headers", "Content-Type"},
                                     {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
        server_.Options(R"(.*)", [](const Req&, Res& res) { res.status = 204; });

        server_.Get(R"(/feed/([^/]+)/([^/]+)\.ics)", guarded([this](const Req& req, Res& res) {
            const auto contract = address_arg(req.matches[1].str(), "contract");
            const auto user = address_arg(req.matches[2].str(), "user");
            const auto ics = cal_store::decode_string(query(contract, user, cal_store::get_events_ical()));
            res.set_content(ics, "text/calendar; charset=utf-8");
        }));

        server_.Get("/api/events", guarded([this](const Req& req, Res& res) {
            const auto events = decode_events(query(param(req, "contract"), param(req, "user"), cal_store::get_events_obj()));
            send_json(res, wire::to_json(events));
        }));

        server_.Get("/api/access", guarded([this](const Req& req, Res& res) {
            const auto g = cal_auth::decode_grant(query(param(req, "contract"), param(req, "user"), cal_auth::user_access_level()));
            send_json(res, wire::to_json(g));
        }));

        server_.Get("/api/grants", guarded([this](const Req& req, Res& res) {
            const auto contract = param(req, "contract");
            const auto owner = cal_auth::decode_address(query(contract, contract, cal_auth::owner()));
            const auto grants = cal_auth::decode_grants(query(contract, contract, cal_auth::list_grants()));
            wire::Json list = wire::Json::array();
            for (const auto& g : grants) list.push_back(wire::to_json(g));
            send_json(res, {{"owner", owner.hex()}, {"grants", list}});
        }));

        server_.Get("/api/messages", guarded([this](const Req& req, Res& res) {
            const auto msgs =
                msg_time_store::decode_messages(query(param(req, "contract"), param(req, "user"), msg_time_store::get_msg_timed()));
            wire::Json list = wire::Json::array();
            for (const auto& m : msgs) list.push_back(wire::to_json(m));
            send_json(res, list);
        }));

        server_.Get("/api/account", guarded([this](const Req& req, Res& res) {
            const auto a = param(req, "address");
            const auto acct = node_.ledger().account(a);
            send_json(res, {{"address", a.hex()},
                            {"balance", acct.balance},
                            {"nonce", acct.nonce},
                            {"next_nonce", node_.ledger().next_nonce(a)}});
        }));

        server_.Get("/api/contract", guarded([this](const Req& req, Res& res) {
            const auto a = param(req, "address");
            const auto snap = node_.ledger().snapshot();
            const auto it = snap->contracts.find(a);
            if (it == snap->contracts.end()) fail(Errc::UnknownContract, "no contract at " + a.hex());
            send_json(res, {{"address", a.hex()},
                            {"kind", it->second.kind},
                            {"owner", it->second.owner.hex()},
                            {"storage_bytes", it->second.storage.size()},
                            {"storage_quota", it->second.storage_quota}});
        }));

        server_.Get("/api/head", guarded([this](const Req&, Res& res) {
            const auto& l = node_.ledger();
            const auto ts = l.last_timestamp();
            send_json(res, {{"height", l.height()},
                            {"state_digest", to_hex(l.state_digest())},
                            {"last_timestamp", ts ? wire::Json(*ts) : wire::Json(nullptr)},
                            {"pending", l.pending()},
                            {"suite", l.suite().name},
                            {"fees", {{"write_base", l.fees().write_base}, {"write_per_byte", l.fees().write_per_byte}}},
                            {"dev_mode", options_.dev_mode}});
        }));

        // Generic read for clients that speak the canonical call encoding.
        server_.Post("/api/query", guarded([this](const Req& req, Res& res) {
            const auto j = wire::Json::parse(req.body);
            const auto args = from_hex(j.value("args", std::string()));
            if (!args) fail(Errc::Malformed, "args must be hex");
            const auto out = query(wire::address_field(j, "contract"), wire::address_field(j, "caller"),
                                   Call{j.at("op").get<std::string>(), *args});
            send_json(res, {{"result", to_hex(out)}});
        }));

        server_.Post("/api/tx", guarded([this](const Req& req, Res& res) {
            Bytes raw;
            if (req.get_header_value("Content-Type") == "application/octet-stream") {
                raw.assign(req.body.begin(), req.body.end());
            } else {
                const auto j = wire::Json::parse(req.body);
                auto bytes = from_hex(j.at("tx").get<std::string>());
                if (!bytes) fail(Errc::Malformed, "tx must be hex");
                raw = std::move(*bytes);
            }
            const auto tx = SignedTransaction::decode(raw);
            const auto receipt = node_.ledger().submit(tx);
            send_json(res, {{"id", to_hex(receipt.id)}, {"pool_position", receipt.pool_position}, {"status", "pending"}},
                      202);
        }));

        server_.Get(R"(/api/tx/([0-9a-fA-F]{64}))", guarded([this](const Req& req, Res& res) {
            const auto bytes = from_hex(req.matches[1].str());
            TxId id{};
            std::copy(bytes->begin(), bytes->end(), id.begin());
            const auto st = node_.ledger().status(id);
            if (!st) fail(Errc::NotFound, "unknown transaction");
            send_json(res, wire::to_json(id, *st), st->outcome == TxOutcome::Failed ? 409 : 200);
        }));

        server_.Post("/admin/seal", guarded([this](const Req&, Res& res) {
            if (!options_.dev_mode) fail(Errc::AccessDenied, "sealing over HTTP requires dev mode");
            const auto b = node_.seal();
            send_json(res, {{"height", b.height},
                            {"timestamp", b.timestamp},
                            {"transactions", b.transactions.size()},
                            {"state_digest", to_hex(b.state_digest)}});
        }));
    }

    Node& node_;
    GatewayOptions options_;
    httplib::Server server_;
    std::thread thread_;
};

}  // namespace pimledger
