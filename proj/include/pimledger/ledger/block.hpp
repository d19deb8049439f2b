// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "pimledger/ledger/transaction.hpp"

namespace pimledger {

inline constexpr std::uint8_t kBlockVersion = 1;

struct Block {
    std::uint64_t height = 0;
    Digest parent_digest{};
    std::int64_t timestamp = 0;
    std::vector<SignedTransaction> transactions;
    Digest state_digest{};
    Signature seal{};  // sequencer signature over header_payload(); zero when the chain is unsealed

    /// Everything except the seal.
    Bytes header_payload() const {
        Writer w;
        w.u8(kBlockVersion).u64(height).fixed(parent_digest).i64(timestamp);
        w.count(transactions.size());
        for (const auto& tx : transactions) w.bytes(tx.encode());
        w.fixed(state_digest);
        return std::move(w).take();
    }

    Bytes encode() const {
        Bytes out = header_payload();
        out.insert(out.end(), seal.begin(), seal.end());
        return out;
    }

    static Block decode(ByteView data) {
        Reader r(data);
        if (r.u8() != kBlockVersion) fail(Errc::Malformed, "unsupported block version");
        Block b;
        b.height = r.u64();
        b.parent_digest = r.fixed<32>();
        b.timestamp = r.i64();
        const auto n = r.count(4);
        b.transactions.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            const Bytes raw = r.bytes();
            b.transactions.push_back(SignedTransaction::decode(raw));
        }
        b.state_digest = r.fixed<32>();
        b.seal = r.fixed<64>();
        r.expect_done();
        return b;
    }

    Digest digest(const CryptoSuite& suite = default_suite()) const { return suite.digest(encode()); }

    bool operator==(const Block&) const = default;
};

}  // namespace pimledger
