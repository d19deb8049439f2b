// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pimledger/address.hpp"
#include "pimledger/codec.hpp"
#include "pimledger/crypto.hpp"
#include "pimledger/ledger/fees.hpp"

namespace pimledger {

inline constexpr std::uint8_t kStateVersion = 1;
inline constexpr std::uint64_t kDefaultStorageQuota = 24576;

struct Account {
    std::uint64_t nonce = 0;
    std::uint64_t balance = 0;

    bool operator==(const Account&) const = default;
};

struct ContractRecord {
    std::string kind;
    Address owner;
    std::uint64_t storage_quota = kDefaultStorageQuota;
    Bytes storage;

    bool operator==(const ContractRecord&) const = default;
};

/// Replicated ledger state. Maps are unordered in memory; the canonical
/// encoding sorts by address, so the digest never depends on hash-table layout.
/// `current_time` is committed by block headers and is not part of the digest.
struct ChainState {
    std::unordered_map<Address, Account, AddressHash> accounts;
    std::unordered_map<Address, ContractRecord, AddressHash> contracts;
    std::uint64_t fees_burned = 0;
    std::int64_t current_time = 0;

    Bytes encode() const {
        Writer w;
        w.u8(kStateVersion);
        const auto account_keys = sorted_keys(accounts);
        w.count(account_keys.size());
        for (const auto& a : account_keys) {
            const auto& acct = accounts.at(a);
            write_address(w, a);
            w.u64(acct.nonce).u64(acct.balance);
        }
        const auto contract_keys = sorted_keys(contracts);
        w.count(contract_keys.size());
        for (const auto& a : contract_keys) {
            const auto& c = contracts.at(a);
            write_address(w, a);
            w.str(c.kind);
            write_address(w, c.owner);
            w.u64(c.storage_quota).bytes(c.storage);
        }
        w.u64(fees_burned);
        return std::move(w).take();
    }

    Digest digest(const CryptoSuite& suite = default_suite()) const { return suite.digest(encode()); }

    Account account(const Address& a) const {
        auto it = accounts.find(a);
        return it == accounts.end() ? Account{} : it->second;
    }

    bool operator==(const ChainState& o) const {
        return accounts == o.accounts && contracts == o.contracts && fees_burned == o.fees_burned;
    }

  private:
    template <class Map>
    static std::vector<Address> sorted_keys(const Map& m) {
        std::vector<Address> keys;
        keys.reserve(m.size());
        for (const auto& [k, _] : m) keys.push_back(k);
        std::sort(keys.begin(), keys.end());
        return keys;
    }
};

/// Chain parameters every replica must agree on before block 0.
struct Genesis {
    FeeSchedule fees;
    std::vector<std::pair<Address, std::uint64_t>> allocations;
    std::optional<PublicKey> sequencer;  // when set, every block must carry this key's seal

    ChainState initial_state() const {
        ChainState s;
        for (const auto& [addr, balance] : allocations) s.accounts[addr].balance += balance;
        return s;
    }

    Bytes encode() const {
        auto sorted = allocations;
        std::sort(sorted.begin(), sorted.end());
        Writer w;
        w.u8(1);
        pimledger::encode(w, fees);
        w.count(sorted.size());
        for (const auto& [addr, balance] : sorted) {
            write_address(w, addr);
            w.u64(balance);
        }
        w.boolean(sequencer.has_value());
        if (sequencer) w.fixed(*sequencer);
        return std::move(w).take();
    }

    static Genesis decode(ByteView data) {
        Reader r(data);
        if (r.u8() != 1) fail(Errc::Malformed, "unsupported genesis version");
        Genesis g;
        g.fees = decode_fee_schedule(r);
        const auto n = r.count(28);
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto addr = read_address(r);
            g.allocations.emplace_back(addr, r.u64());
        }
        if (r.boolean()) g.sequencer = r.fixed<32>();
        r.expect_done();
        return g;
    }
};

}  // namespace pimledger
