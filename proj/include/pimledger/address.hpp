// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "pimledger/bytes.hpp"
#include "pimledger/codec.hpp"
#include "pimledger/crypto.hpp"

namespace pimledger {

/// 20-byte account or contract identifier, rendered as 0x-prefixed lowercase hex.
class Address {
  public:
    static constexpr std::size_t kSize = 20;
    using Raw = std::array<std::uint8_t, kSize>;

    constexpr Address() = default;
    explicit constexpr Address(const Raw& raw) : raw_(raw) {}

    static Address from_public_key(const PublicKey& pk, const CryptoSuite& suite = default_suite()) {
        return truncate(suite.digest(pk));
    }

    // Contract addresses depend only on who created them and the creator's nonce at the time.
    static Address for_contract(const Address& creator, std::uint64_t creator_nonce,
                                const CryptoSuite& suite = default_suite()) {
        Writer w;
        w.u8(0x01).fixed(creator.raw()).u64(creator_nonce);
        return truncate(suite.digest(w.data()));
    }

    static std::optional<Address> parse(std::string_view text) {
        if (text.size() != 2 + 2 * kSize || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) return std::nullopt;
        auto bytes = from_hex(text.substr(2));
        if (!bytes) return std::nullopt;
        Raw raw{};
        std::copy(bytes->begin(), bytes->end(), raw.begin());
        return Address(raw);
    }

    std::string hex() const { return "0x" + to_hex(raw_); }
    const Raw& raw() const { return raw_; }
    bool is_zero() const { return raw_ == Raw{}; }

    auto operator<=>(const Address&) const = default;

  private:
    static Address truncate(const Digest& d) {
        Raw raw{};
        std::copy_n(d.begin(), kSize, raw.begin());
        return Address(raw);
    }

    Raw raw_{};
};

struct AddressHash {
    std::size_t operator()(const Address& a) const noexcept {
        std::size_t h = 0;
        std::memcpy(&h, a.raw().data(), sizeof(h));
        return h;
    }
};

inline void write_address(Writer& w, const Address& a) { w.fixed(a.raw()); }
inline Address read_address(Reader& r) { return Address(r.fixed<Address::kSize>()); }

struct Identity {
    KeyPair keys;
    Address address;
};

inline Identity keygen(const Seed& seed, const CryptoSuite& suite = default_suite()) {
    auto kp = suite.keypair_from_seed(seed);
    return {kp, Address::from_public_key(kp.public_key, suite)};
}

inline Identity keygen(std::uint64_t seed, const CryptoSuite& suite = default_suite()) {
    return keygen(seed_from_integer(seed, suite), suite);
}

inline Identity keygen() { return keygen(random_seed()); }

}  // namespace pimledger

template <>
struct std::hash<pimledger::Address> : pimledger::AddressHash {};
