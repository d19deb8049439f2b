// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "pimledger/ledger/state.hpp"
#include "pimledger/runtime/contract.hpp"

namespace pimledger {

/// Passes iff the immediate caller owns the contract.
inline bool passes_owner_guard(const CallContext& ctx, const ContractRecord& instance) {
    return ctx.msg_sender == instance.owner;
}

inline void only_owner_guard(const CallContext& ctx, const ContractRecord& instance) {
    if (!passes_owner_guard(ctx, instance))
        fail(Errc::AccessDenied, ctx.msg_sender.hex() + " is not the contract owner");
}

/// Executes one top-level call (and its nested calls) against a base state.
/// Writes go to an overlay that reaches the state only through commit(), so
/// a failure anywhere in the call tree leaves storage untouched.
class Host {
  public:
    Host(const Registry& registry, const ChainState& base, const CryptoSuite& suite = default_suite())
        : registry_(registry), base_(base), suite_(suite) {}

    Host(const Host&) = delete;
    Host& operator=(const Host&) = delete;

    const ContractRecord* find(const Address& a) const {
        if (auto it = overlay_.find(a); it != overlay_.end()) return &it->second;
        if (auto it = base_.contracts.find(a); it != base_.contracts.end()) return &it->second;
        return nullptr;
    }

    const ContractRecord& record(const Address& a) const {
        const auto* r = find(a);
        if (!r) fail(Errc::UnknownContract, "no contract at " + a.hex());
        return *r;
    }

    Address deploy(const CallContext& ctx, std::string_view kind_tag, const DeployArgs& args,
                   std::uint64_t creator_nonce) {
        if (ctx.read_only) fail(Errc::ReadOnlyViolation, "deployment in a read-only context");
        const auto& kind = registry_.at(kind_tag);
        const Address addr = Address::for_contract(ctx.origin, creator_nonce, suite_);
        if (find(addr)) fail(Errc::Malformed, "contract address collision at " + addr.hex());

        ContractRecord rec;
        rec.kind = kind.tag;
        rec.owner = ctx.origin;
        rec.storage_quota = args.storage_quota == 0 ? kDefaultStorageQuota : args.storage_quota;
        overlay_[addr] = rec;  // visible to the constructor, e.g. for owner_of(self)

        std::unique_ptr<Contract> instance;
        {
            Frame frame(stack_, addr);
            instance = kind.construct(*this, ctx, addr, args.init);
        }
        store(addr, *instance);
        return addr;
    }

    Bytes call(const Address& target, const CallContext& ctx, std::string_view op, ByteView args) {
        const auto& rec = record(target);
        if (std::find(stack_.begin(), stack_.end(), target) != stack_.end())
            fail(Errc::ReentrancyBlocked, "re-entrant call into " + target.hex());

        const auto& kind = registry_.at(rec.kind);
        auto instance = kind.decode(rec.storage);
        const OpSpec* spec = instance->find_op(op);
        if (!spec) fail(Errc::UnknownOperation, rec.kind + " has no operation '" + std::string(op) + "'");
        if (ctx.read_only && !spec->read_only)
            fail(Errc::ReadOnlyViolation, std::string(op) + " mutates state but the call is read-only");

        // A read-only operation runs read-only all the way down.
        CallContext inner = ctx;
        inner.read_only = ctx.read_only || spec->read_only;
        Bytes result;
        {
            Frame frame(stack_, target);
            result = instance->invoke(*this, inner, op, args);
        }
        if (!spec->read_only) store(target, *instance);
        return result;
    }

    /// Nested call made by contract `self`: the callee sees `self` as msg_sender.
    Bytes call_from(const Address& self, const CallContext& parent, const Address& target, std::string_view op,
                    ByteView args) {
        if (stack_.empty() || stack_.back() != self)
            fail(Errc::AccessDenied, "nested call must originate from the executing contract");
        CallContext child{self, parent.origin, parent.block_time, parent.read_only};
        return call(target, child, op, args);
    }

    /// Address of the contract currently executing.
    const Address& self() const {
        if (stack_.empty()) fail(Errc::Malformed, "no contract is executing");
        return stack_.back();
    }

    const Address& owner_of(const Address& contract) const { return record(contract).owner; }

    /// Ownable-style transfer; only the executing contract may change its own owner.
    void set_owner(const Address& self, const Address& new_owner) {
        if (stack_.empty() || stack_.back() != self) fail(Errc::AccessDenied, "only a contract may set its own owner");
        auto& rec = writable(self);
        rec.owner = new_owner;
    }

    std::size_t depth() const { return stack_.size(); }

    void commit(ChainState& state) && {
        for (auto& [addr, rec] : overlay_) state.contracts[addr] = std::move(rec);
        overlay_.clear();
    }

  private:
    struct Frame {
        Frame(std::vector<Address>& stack, const Address& a) : stack_(stack) { stack_.push_back(a); }
        ~Frame() { stack_.pop_back(); }
        std::vector<Address>& stack_;
    };

    ContractRecord& writable(const Address& a) {
        if (auto it = overlay_.find(a); it != overlay_.end()) return it->second;
        return overlay_[a] = record(a);
    }

    void store(const Address& addr, const Contract& instance) {
        Bytes encoded = instance.encode();
        auto& rec = writable(addr);
        if (encoded.size() > rec.storage_quota)
            fail(Errc::QuotaExceeded, "storage " + std::to_string(encoded.size()) + " bytes exceeds quota " +
                                          std::to_string(rec.storage_quota));
        rec.storage = std::move(encoded);
    }

    const Registry& registry_;
    const ChainState& base_;
    const CryptoSuite& suite_;
    std::unordered_map<Address, ContractRecord, AddressHash> overlay_;
    std::vector<Address> stack_;
};

}  // namespace pimledger
