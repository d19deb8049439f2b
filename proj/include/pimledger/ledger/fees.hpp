// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "pimledger/codec.hpp"
#include "pimledger/error.hpp"

namespace pimledger {

/// Abstract fee units. Only writes cost anything; reads are free by construction.
struct FeeSchedule {
    static constexpr std::uint64_t kReadCost = 0;

    std::uint64_t write_base = 0;
    std::uint64_t write_per_byte = 0;

    std::uint64_t write_fee(std::size_t arg_bytes) const {
        const auto per_byte = static_cast<std::uint64_t>(arg_bytes);
        if (write_per_byte != 0 && per_byte > (std::numeric_limits<std::uint64_t>::max() - write_base) / write_per_byte)
            fail(Errc::OutOfRange, "fee overflows u64");
        return write_base + write_per_byte * per_byte;
    }

    bool operator==(const FeeSchedule&) const = default;
};

inline void encode(Writer& w, const FeeSchedule& f) { w.u64(f.write_base).u64(f.write_per_byte); }

inline FeeSchedule decode_fee_schedule(Reader& r) {
    FeeSchedule f;
    f.write_base = r.u64();
    f.write_per_byte = r.u64();
    return f;
}

/// Debits the write fee for `arg_bytes` of call arguments and returns it.
inline std::uint64_t charge_fee(std::uint64_t& balance, const FeeSchedule& schedule, std::size_t arg_bytes) {
    const auto fee = schedule.write_fee(arg_bytes);
    if (balance < fee)
        fail(Errc::InsufficientBalance,
             "fee " + std::to_string(fee) + " exceeds balance " + std::to_string(balance));
    balance -= fee;
    return fee;
}

}  // namespace pimledger
