// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "pimledger/gateway/client.hpp"
#include "pimledger/gateway/gateway.hpp"

namespace pimledger::testing {

/// A dev-mode gateway over an in-memory sealed node, on an ephemeral port.
struct LiveGateway {
    Identity sequencer = keygen(7);
    ManualClock clock{1'600'000'000};
    std::unique_ptr<Node> node;
    std::unique_ptr<Gateway> gateway;
    int port = 0;

    explicit LiveGateway(std::size_t accounts = 8, bool dev = true, FeeSchedule fees = {1, 1}) {
        Genesis g;
        g.fees = fees;
        g.sequencer = sequencer.keys.public_key;
        for (std::size_t i = 0; i < accounts; ++i) g.allocations.emplace_back(user(i).address, 1'000'000'000);
        node = std::make_unique<Node>(g, clock.clock(), sequencer.keys);
        gateway = std::make_unique<Gateway>(*node, GatewayOptions{dev});
        port = gateway->start();
    }

    static Identity user(std::size_t i) { return keygen(700 + i); }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
    GatewayClient client() const { return GatewayClient(url()); }
};

/// Submits through the gateway, seals, and returns the final status.
inline TxStatus submit_and_seal(GatewayClient& c, const Identity& who, std::optional<Address> target, const Call& call) {
    const auto nonce = c.account(who.address).next_nonce;
    const auto r = c.submit(make_transaction(who, nonce, target, call.op, call.args));
    c.seal();
    return *c.status(r.id);
}

inline Address deploy_via(GatewayClient& c, const Identity& who, std::string_view kind, Bytes init = {}) {
    const auto st = submit_and_seal(c, who, std::nullopt, Call{std::string(kind), DeployArgs{0, std::move(init)}.encode()});
    if (st.outcome != TxOutcome::Succeeded) throw Error(*st.error, st.message);
    return *st.created;
}

}  // namespace pimledger::testing
