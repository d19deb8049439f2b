// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "pimledger/bytes.hpp"
#include "pimledger/codec.hpp"

namespace pimledger {

using Digest = std::array<std::uint8_t, 32>;
using PublicKey = std::array<std::uint8_t, 32>;
using SecretKey = std::array<std::uint8_t, 64>;
using Signature = std::array<std::uint8_t, 64>;
using Seed = std::array<std::uint8_t, 32>;

struct KeyPair {
    PublicKey public_key{};
    SecretKey secret_key{};

    bool operator==(const KeyPair&) const = default;
};

/// Digest and signature primitives used by the ledger. Hashing, signing and
/// key derivation all go through one suite so followers and the sequencer agree
/// bit for bit; the only shipped suite is `sha256-ed25519`.
struct CryptoSuite {
    const char* name;
    Digest (*digest)(ByteView data);
    KeyPair (*keypair_from_seed)(const Seed& seed);
    Signature (*sign)(ByteView message, const SecretKey& secret_key);
    bool (*verify)(ByteView message, const Signature& signature, const PublicKey& public_key);
};

namespace detail {

inline void ensure_sodium() {
    static const bool ready = [] { return sodium_init() >= 0; }();
    if (!ready) throw std::runtime_error("libsodium initialisation failed");
}

inline Digest sodium_sha256(ByteView data) {
    Digest out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

inline KeyPair sodium_keypair(const Seed& seed) {
    KeyPair kp;
    crypto_sign_ed25519_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed.data());
    return kp;
}

inline Signature sodium_sign(ByteView message, const SecretKey& sk) {
    Signature sig{};
    crypto_sign_ed25519_detached(sig.data(), nullptr, message.data(), message.size(), sk.data());
    return sig;
}

inline bool sodium_verify(ByteView message, const Signature& sig, const PublicKey& pk) {
    return crypto_sign_ed25519_verify_detached(sig.data(), message.data(), message.size(), pk.data()) == 0;
}

}  // namespace detail

inline const CryptoSuite& default_suite() {
    detail::ensure_sodium();
    static const CryptoSuite suite{"sha256-ed25519", &detail::sodium_sha256, &detail::sodium_keypair,
                                   &detail::sodium_sign, &detail::sodium_verify};
    return suite;
}

// Seeds derived from an integer make test keys reproducible.
inline Seed seed_from_integer(std::uint64_t n, const CryptoSuite& suite = default_suite()) {
    Writer w;
    w.str("pimledger.keygen.v1").u64(n);
    return suite.digest(w.data());
}

inline Seed random_seed() {
    detail::ensure_sodium();
    Seed s{};
    randombytes_buf(s.data(), s.size());
    return s;
}

inline Seed seed_of(const KeyPair& kp) {
    // Ed25519 secret keys in libsodium layout are seed || public key.
    Seed s{};
    std::copy_n(kp.secret_key.begin(), s.size(), s.begin());
    return s;
}

}  // namespace pimledger
