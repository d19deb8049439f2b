// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pimledger/address.hpp"
#include "pimledger/codec.hpp"
#include "pimledger/crypto.hpp"

namespace pimledger {

inline constexpr std::uint8_t kTxVersion = 1;

/// A state-changing request signed by an externally owned account. A missing
/// target means CREATE: `op` names the contract kind and `args` are deploy args.
struct SignedTransaction {
    PublicKey public_key{};
    Address sender;
    std::uint64_t nonce = 0;
    std::optional<Address> target;
    std::string op;
    Bytes args;
    Signature signature{};

    bool is_create() const { return !target.has_value(); }

    // Everything the signature covers.
    Bytes signing_payload() const {
        Writer w;
        w.u8(kTxVersion).fixed(public_key);
        write_address(w, sender);
        w.u64(nonce);
        if (target) {
            w.u8(1);
            write_address(w, *target);
        } else {
            w.u8(0);
        }
        w.str(op).bytes(args);
        return std::move(w).take();
    }

    Bytes encode() const {
        Writer w;
        w.raw(signing_payload()).fixed(signature);
        return std::move(w).take();
    }

    static SignedTransaction decode(ByteView data) {
        Reader r(data);
        SignedTransaction tx;
        if (r.u8() != kTxVersion) fail(Errc::Malformed, "unsupported transaction version");
        tx.public_key = r.fixed<32>();
        tx.sender = read_address(r);
        tx.nonce = r.u64();
        switch (r.u8()) {
            case 0: break;
            case 1: tx.target = read_address(r); break;
            default: fail(Errc::Malformed, "bad transaction target tag");
        }
        tx.op = r.str();
        tx.args = r.bytes();
        tx.signature = r.fixed<64>();
        r.expect_done();
        return tx;
    }

    bool operator==(const SignedTransaction&) const = default;
};

using TxId = Digest;

inline TxId tx_id(const SignedTransaction& tx, const CryptoSuite& suite = default_suite()) {
    return suite.digest(tx.encode());
}

inline SignedTransaction make_transaction(const Identity& who, std::uint64_t nonce, std::optional<Address> target,
                                          std::string op, Bytes args, const CryptoSuite& suite = default_suite()) {
    SignedTransaction tx;
    tx.public_key = who.keys.public_key;
    tx.sender = who.address;
    tx.nonce = nonce;
    tx.target = target;
    tx.op = std::move(op);
    tx.args = std::move(args);
    tx.signature = suite.sign(tx.signing_payload(), who.keys.secret_key);
    return tx;
}

// True when the signature checks out and the public key really is the sender's.
inline bool verify_transaction(const SignedTransaction& tx, const CryptoSuite& suite = default_suite()) {
    if (Address::from_public_key(tx.public_key, suite) != tx.sender) return false;
    return suite.verify(tx.signing_payload(), tx.signature, tx.public_key);
}

}  // namespace pimledger
