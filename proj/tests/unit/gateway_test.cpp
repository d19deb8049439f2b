// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <random>

#include "../support/chain_fixture.hpp"
#include "../support/gateway_fixture.hpp"

using namespace pimledger;
using namespace pimledger::testing;
namespace ca = pimledger::cal_auth;
namespace cs = pimledger::cal_store;
namespace mts = pimledger::msg_time_store;

TEST_CASE("feed and event API agree for random contract and user pairs") {
    LiveGateway gw;
    auto c = gw.client();
    const auto admin = LiveGateway::user(0);
    const auto store = deploy_via(c, admin, cs::kKind);
    const auto auth = deploy_via(c, admin, ca::kKind, ca::init_args(store));

    std::mt19937_64 rng(21);
    const auto t0 = gw.clock.now();
    for (std::size_t u = 1; u < 6; ++u) {
        const auto level = u % 2 ? ca::AccessLevel::Write : ca::AccessLevel::Read;
        std::optional<std::int64_t> nb, na;
        if (u == 4) nb = t0, na = t0 + 5 * 86400;
        REQUIRE(submit_and_seal(c, admin, auth, ca::grant_access(LiveGateway::user(u).address, level, nb, na)).outcome ==
                TxOutcome::Succeeded);
    }
    for (int i = 0; i < 60; ++i) {
        const auto who = LiveGateway::user(rng() % 6);
        const auto start = t0 + static_cast<std::int64_t>(rng() % (20 * 86400));
        const Address target = rng() % 2 ? store : auth;
        gw.clock.advance(30);
        submit_and_seal(c, who, target,
                        cs::store_event(start, start + 1800, "meeting, room " + std::to_string(i), "agenda;\nnotes"));
    }

    httplib::Client raw(gw.url());
    for (int trial = 0; trial < 40; ++trial) {
        const Address contract = trial % 2 ? store : auth;
        const auto user = LiveGateway::user(rng() % 8);
        const auto g = contract == auth ? c.access(auth, user.address) : ca::RoleGrant{};
        const auto path = "/feed/" + contract.hex() + "/" + user.address.hex() + ".ics";
        auto res = raw.Get(path);
        REQUIRE(res);
        if (contract == auth && g.level == ca::AccessLevel::None) {
            CHECK(res->status == 403);
            CHECK(error_of([&] { c.events(contract, user.address); }) == Errc::AccessDenied);
            continue;
        }
        REQUIRE(res->status == 200);
        CHECK(res->get_header_value("Content-Type") == "text/calendar; charset=utf-8");
        CHECK(ical::parse(res->body).events == c.events(contract, user.address));
    }
}

TEST_CASE("feed edge cases and error statuses") {
    LiveGateway gw;
    auto c = gw.client();
    const auto admin = LiveGateway::user(0);
    const auto store = deploy_via(c, admin, cs::kKind);
    httplib::Client raw(gw.url());

    auto res = raw.Get("/feed/" + store.hex() + "/" + LiveGateway::user(5).address.hex() + ".ics");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(ical::parse(res->body).events.empty());
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");

    CHECK(raw.Get("/feed/0x1234/" + admin.address.hex() + ".ics")->status == 400);
    CHECK(raw.Get("/feed/" + keygen(3).address.hex() + "/" + admin.address.hex() + ".ics")->status == 404);
    CHECK(raw.Get("/api/events?contract=" + store.hex())->status == 400);
    CHECK(raw.Options("/api/events")->status == 204);

    const auto msgs = deploy_via(c, admin, mts::kKind);
    CHECK(raw.Get("/feed/" + msgs.hex() + "/" + admin.address.hex() + ".ics")->status == 400);

    // Bad signature and stale nonce are rejected before pooling.
    auto tx = make_transaction(admin, c.account(admin.address).next_nonce, store, "store_event",
                               cs::store_event(1, 2, "x", "").args);
    tx.signature[0] ^= 1;
    auto bad = raw.Post("/api/tx", wire::Json{{"tx", to_hex(tx.encode())}}.dump(), "application/json");
    CHECK(bad->status == 422);
    CHECK(wire::Json::parse(bad->body)["error"] == "BadSignature");
    auto stale = make_transaction(admin, 0, store, "store_event", cs::store_event(1, 2, "x", "").args);
    CHECK(raw.Post("/api/tx", wire::Json{{"tx", to_hex(stale.encode())}}.dump(), "application/json")->status == 422);
    CHECK(raw.Post("/api/tx", "{\"tx\": \"zz\"}", "application/json")->status == 400);
    CHECK(raw.Post("/api/tx", "not json", "application/json")->status == 400);
    CHECK(raw.Get("/api/tx/" + std::string(64, '0'))->status == 404);
}

TEST_CASE("an expired write window is included but failed") {
    LiveGateway gw;
    auto c = gw.client();
    const auto admin = LiveGateway::user(0), bob = LiveGateway::user(1);
    const auto store = deploy_via(c, admin, cs::kKind);
    const auto auth = deploy_via(c, admin, ca::kKind, ca::init_args(store));
    const auto now = gw.clock.now();
    submit_and_seal(c, admin, auth, ca::grant_access(bob.address, ca::AccessLevel::Write, now, now + 100));
    CHECK(submit_and_seal(c, bob, auth, cs::store_event(now, now + 1, "on shift", "")).outcome == TxOutcome::Succeeded);

    gw.clock.advance(1000);  // Bob's contract has ended
    const auto r = c.submit(make_transaction(bob, c.account(bob.address).next_nonce, auth, "store_event",
                                             cs::store_event(now, now + 1, "after leaving", "").args));
    CHECK(c.status(r.id)->outcome == TxOutcome::Pending);
    c.seal();
    const auto st = *c.status(r.id);
    CHECK(st.outcome == TxOutcome::Failed);
    CHECK(st.error == Errc::AccessDenied);
    CHECK(st.height.has_value());
    httplib::Client raw(gw.url());
    CHECK(raw.Get("/api/tx/" + to_hex(r.id))->status == 409);
    CHECK(c.events(auth, admin.address).size() == 1);
}

TEST_CASE("dev seal control") {
    LiveGateway gw;
    auto c = gw.client();
    const auto h0 = c.head().height;
    CHECK(c.seal() == h0);
    CHECK(c.head().height == h0 + 1);

    const auto alice = LiveGateway::user(0);
    c.submit(make_transaction(alice, 0, std::nullopt, std::string(mts::kKind), DeployArgs{}.encode()));
    c.submit(make_transaction(alice, 1, std::nullopt, std::string(cs::kKind), DeployArgs{}.encode()));
    CHECK(c.head().pending == 2);
    httplib::Client raw(gw.url());
    auto res = raw.Post("/admin/seal", "", "application/json");
    CHECK(wire::Json::parse(res->body)["transactions"] == 2);
    CHECK(c.head().pending == 0);

    gw.clock.advance(-10);
    CHECK(raw.Post("/admin/seal", "", "application/json")->status == 409);

    LiveGateway prod(2, false);
    CHECK(httplib::Client(prod.url()).Post("/admin/seal", "", "application/json")->status == 403);
}

TEST_CASE("reads are fee-free and survive a gateway restart") {
    LiveGateway gw;
    auto c = gw.client();
    const auto alice = LiveGateway::user(0);
    const auto store = deploy_via(c, alice, cs::kKind);
    const auto msgs = deploy_via(c, alice, mts::kKind);
    const auto auth = deploy_via(c, alice, ca::kKind, ca::init_args(store));
    submit_and_seal(c, alice, store, cs::store_event(10, 20, "x", ""));
    submit_and_seal(c, alice, msgs, mts::store_msg("later", gw.clock.now() + 50));

    const auto head = c.head();
    const auto bal = c.account(alice.address);
    const auto events = c.events(store, alice.address);
    const auto feed = c.feed(store, alice.address);
    for (int i = 0; i < 5; ++i) {
        c.events(store, alice.address);
        c.feed(store, alice.address);
        c.access(auth, alice.address);
        c.grants(auth);
        c.messages(msgs, alice.address);
        c.contract(store);
        c.query(store, alice.address, cs::get_events_obj());
    }
    CHECK(c.head().state_digest == head.state_digest);
    CHECK(c.head().height == head.height);
    CHECK(c.account(alice.address).balance == bal.balance);

    const auto m = c.messages(msgs, alice.address);
    REQUIRE(m.size() == 1);
    CHECK(m[0].is_empty_slot());
    CHECK(c.access(auth, alice.address).level == ca::AccessLevel::Admin);
    CHECK(c.contract(auth).kind == ca::kKind);

    gw.gateway->stop();
    gw.gateway = std::make_unique<Gateway>(*gw.node, GatewayOptions{true});
    gw.port = gw.gateway->start();
    auto c2 = gw.client();
    CHECK(c2.events(store, alice.address) == events);
    CHECK(c2.feed(store, alice.address) == feed);
    CHECK(c2.head().state_digest == head.state_digest);
}

TEST_CASE("an unreachable gateway is a transport error") {
    int port = 0;
    {
        LiveGateway gw(1);
        port = gw.port;
    }
    GatewayClient c("http://127.0.0.1:" + std::to_string(port));
    CHECK(error_of([&] { c.head(); }) == Errc::Transport);
}
