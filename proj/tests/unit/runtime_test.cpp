// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <random>

#include "../support/chain_fixture.hpp"
#include "../support/probe_contract.hpp"
#include "pimledger/runtime/role_set.hpp"

using namespace pimledger;
using namespace pimledger::testing;

namespace {

struct World {
    Registry registry;
    ChainState state;
    Identity signer = keygen(1);
    std::vector<Address> probes;

    explicit World(std::size_t n, std::uint64_t quota = 0) {
        registry.add(probe_kind());
        for (std::size_t i = 0; i < n; ++i) {
            Host host(registry, state);
            probes.push_back(host.deploy(CallContext::direct(signer.address, 0), kProbeKind, {quota, {}}, i));
            std::move(host).commit(state);
        }
    }

    Bytes call(const Address& target, std::string_view op, ByteView args, bool read_only = false) {
        Host host(registry, state);
        auto out = host.call(target, CallContext::direct(signer.address, 5, read_only), op, args);
        std::move(host).commit(state);
        return out;
    }
};

std::pair<Address, Address> whoami(ByteView result) {
    Reader r(result);
    auto sender = read_address(r);
    auto origin = read_address(r);
    r.expect_done();
    return {sender, origin};
}

}  // namespace

TEST_CASE("nested calls substitute msg_sender and keep origin") {
    World w(6);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        auto order = w.probes;
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t depth = 1 + rng() % 3;
        order.resize(depth);
        const std::vector<Address> rest(order.begin() + 1, order.end());
        const auto [sender, origin] = whoami(w.call(order[0], "relay", hops_args(rest)));
        const Address expected = depth == 1 ? w.signer.address : order[depth - 2];
        REQUIRE(sender == expected);
        REQUIRE(origin == w.signer.address);
    }
}

TEST_CASE("a failure deep in the call tree rolls back every frame") {
    World w(3);
    const auto before = w.state.encode();
    const Address missing = keygen(99).address;
    CHECK(error_of([&] { w.call(w.probes[0], "relay_write", hops_args({w.probes[1], w.probes[2], missing})); }) ==
          Errc::UnknownContract);
    CHECK(w.state.encode() == before);

    w.call(w.probes[0], "relay_write", hops_args({w.probes[1], w.probes[2]}));
    CHECK(w.state.encode() != before);
    for (const auto& p : w.probes) {
        const auto size = w.call(p, "blob_size", {});
        CHECK(Reader(size).u64() == 1);
    }

    const auto after = w.state.encode();
    CHECK(error_of([&] { w.call(w.probes[0], "append_then_fail", {}); }) == Errc::AccessDenied);
    CHECK(w.state.encode() == after);
}

TEST_CASE("storage quota admits exactly the quota and rejects one byte more") {
    constexpr std::uint64_t quota = 64;
    World w(1, quota);
    const auto& p = w.probes[0];
    // Probe storage is a u32 length prefix plus the blob.
    w.call(p, "append", Writer().bytes(Bytes(quota - 4 - 1, 0)).data());
    const auto before = w.state.encode();
    w.call(p, "append", Writer().bytes(Bytes(1, 0)).data());
    CHECK(w.state.contracts.at(p).storage.size() == quota);
    const auto full = w.state.encode();
    CHECK(full != before);
    CHECK(error_of([&] { w.call(p, "append", Writer().bytes(Bytes(1, 0)).data()); }) == Errc::QuotaExceeded);
    CHECK(w.state.encode() == full);
}

TEST_CASE("re-entrant calls are blocked") {
    World w(2);
    CHECK(error_of([&] { w.call(w.probes[0], "call_self", {}); }) == Errc::ReentrancyBlocked);
    CHECK(error_of([&] { w.call(w.probes[0], "relay", hops_args({w.probes[1], w.probes[0]})); }) ==
          Errc::ReentrancyBlocked);
}

TEST_CASE("read-only contexts refuse mutation at any depth") {
    World w(2);
    const auto& p = w.probes[0];
    CHECK(error_of([&] { w.call(p, "append", Writer().bytes(Bytes{1}).data(), true); }) == Errc::ReadOnlyViolation);
    Writer target;
    write_address(target, w.probes[1]);
    CHECK(error_of([&] { w.call(p, "try_write_readonly", target.data(), true); }) == Errc::ReadOnlyViolation);
    CHECK(error_of([&] { w.call(p, "try_write_readonly", target.data(), false); }) == Errc::ReadOnlyViolation);
    CHECK(error_of([&] { w.call(p, "no_such_op", {}); }) == Errc::UnknownOperation);
    CHECK(error_of([&] { w.call(keygen(77).address, "whoami", {}); }) == Errc::UnknownContract);
}

TEST_CASE("only a contract may rewrite its own owner") {
    World w(1);
    Host host(w.registry, w.state);
    CHECK(error_of([&] { host.set_owner(w.probes[0], keygen(5).address); }) == Errc::AccessDenied);
    CHECK(host.owner_of(w.probes[0]) == w.signer.address);
}

TEST_CASE("owner guard passes exactly for the owner as immediate caller") {
    std::vector<Address> who;
    for (std::uint64_t i = 0; i < 4; ++i) who.push_back(keygen(i).address);
    for (const auto& owner : who)
        for (const auto& sender : who)
            for (const auto& origin : who) {
                ContractRecord rec;
                rec.owner = owner;
                const CallContext ctx{sender, origin, 0, false};
                REQUIRE(passes_owner_guard(ctx, rec) == (sender == owner));
                REQUIRE(error_of([&] { only_owner_guard(ctx, rec); }) ==
                        (sender == owner ? std::nullopt : std::optional(Errc::AccessDenied)));
            }
}

TEST_CASE("role set requires the admin role to grant and revoke") {
    const auto admin = keygen(1).address, alice = keygen(2).address, bob = keygen(3).address;
    const auto as = [](const Address& a) { return CallContext::direct(a, 0); };
    auto roles = RoleSet::with_admin(admin);
    CHECK(roles.has_role(kDefaultAdminRole, admin));
    CHECK(error_of([&] { roles.grant_role(as(alice), "WRITER", bob); }) == Errc::AccessDenied);
    roles.grant_role(as(admin), "WRITER", alice);
    roles.grant_role(as(admin), "WRITER", alice);
    CHECK(roles.has_role("WRITER", alice));
    CHECK(roles.members("WRITER").size() == 1);
    CHECK(error_of([&] { roles.revoke_role(as(alice), "WRITER", alice); }) == Errc::AccessDenied);
    roles.revoke_role(as(admin), "WRITER", alice);
    roles.revoke_role(as(admin), "WRITER", alice);
    CHECK_FALSE(roles.has_role("WRITER", alice));
    Writer w;
    roles.encode(w);
    Reader r(w.data());
    CHECK(RoleSet::decode(r) == roles);
}

TEST_CASE("deploy arguments and unknown kinds") {
    TestChain chain;
    const auto alice = TestChain::identity(0);
    CHECK(error_of([&] { chain.submit(alice, std::nullopt, Call{"nope", DeployArgs{}.encode()}); }) ==
          Errc::UnknownKind);
    CHECK(error_of([&] { chain.submit(alice, std::nullopt, Call{"cal-store", Bytes{1, 2}}); }) == Errc::Malformed);
}
