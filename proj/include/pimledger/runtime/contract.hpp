// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "pimledger/address.hpp"
#include "pimledger/bytes.hpp"
#include "pimledger/codec.hpp"
#include "pimledger/error.hpp"

namespace pimledger {

/// Who is calling and when. For a direct call msg_sender == origin; a nested
/// call from contract C sees msg_sender == C while origin stays the signer.
struct CallContext {
    Address msg_sender;
    Address origin;
    std::int64_t block_time = 0;
    bool read_only = false;

    static CallContext direct(const Address& account, std::int64_t block_time, bool read_only = false) {
        return {account, account, block_time, read_only};
    }

    bool operator==(const CallContext&) const = default;
};

/// An operation name plus its canonically encoded arguments.
struct Call {
    std::string op;
    Bytes args;
};

struct OpSpec {
    std::string_view name;
    bool read_only;
};

class Host;

/// A native contract. Instances are decoded from storage for every call and
/// re-encoded after a successful mutating one.
class Contract {
  public:
    virtual ~Contract() = default;

    virtual std::span<const OpSpec> operations() const = 0;
    virtual Bytes invoke(Host& host, const CallContext& ctx, std::string_view op, ByteView args) = 0;
    virtual Bytes encode() const = 0;

    const OpSpec* find_op(std::string_view name) const {
        for (const auto& spec : operations())
            if (spec.name == name) return &spec;
        return nullptr;
    }
};

struct ContractKind {
    using Construct =
        std::function<std::unique_ptr<Contract>(Host& host, const CallContext& ctx, const Address& self, ByteView init)>;
    using Decode = std::function<std::unique_ptr<Contract>(ByteView storage)>;

    std::string tag;
    Construct construct;
    Decode decode;
};

class Registry {
  public:
    Registry& add(ContractKind kind) {
        auto tag = kind.tag;
        kinds_.insert_or_assign(std::move(tag), std::move(kind));
        return *this;
    }

    const ContractKind* find(std::string_view tag) const {
        auto it = kinds_.find(std::string(tag));
        return it == kinds_.end() ? nullptr : &it->second;
    }

    const ContractKind& at(std::string_view tag) const {
        const auto* k = find(tag);
        if (!k) fail(Errc::UnknownKind, "no contract kind '" + std::string(tag) + "'");
        return *k;
    }

  private:
    std::map<std::string, ContractKind, std::less<>> kinds_;
};

/// CREATE transaction arguments: storage quota (0 selects the default) and kind-specific init bytes.
struct DeployArgs {
    std::uint64_t storage_quota = 0;
    Bytes init;

    Bytes encode() const {
        Writer w;
        w.u64(storage_quota).bytes(init);
        return std::move(w).take();
    }

    static DeployArgs decode(ByteView data) {
        Reader r(data);
        DeployArgs d;
        d.storage_quota = r.u64();
        d.init = r.bytes();
        r.expect_done();
        return d;
    }
};

}  // namespace pimledger
