// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Single-sequencer ledger. submit() validates a signed transaction against the
// pending view (nonce and balance include everything already pooled), so every
// pooled transaction is guaranteed to apply at seal time; contract-level
// failures are recorded in the receipt and roll back only that transaction's
// contract writes. Followers rebuild the same state with import_block().

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pimledger/ledger/block.hpp"
#include "pimledger/ledger/state.hpp"
#include "pimledger/runtime/host.hpp"

namespace pimledger {

enum class TxOutcome { Pending, Succeeded, Failed };

constexpr std::string_view to_string(TxOutcome o) {
    switch (o) {
        case TxOutcome::Pending: return "pending";
        case TxOutcome::Succeeded: return "included";
        case TxOutcome::Failed: return "failed";
    }
    return "pending";
}

struct TxStatus {
    TxOutcome outcome = TxOutcome::Pending;
    std::uint64_t pool_position = 0;
    std::optional<std::uint64_t> height;
    std::uint32_t index = 0;
    std::optional<Errc> error;
    std::string message;
    Bytes result;
    std::uint64_t fee = 0;
    std::optional<Address> created;
};

struct SubmitReceipt {
    TxId id{};
    std::uint64_t pool_position = 0;
};

class Ledger {
  public:
    using SealHook = std::function<void(const Block&)>;

    /// `sequencer_keys` are needed only to seal blocks on a chain whose genesis names a sequencer.
    Ledger(Genesis genesis, const Registry& registry, const CryptoSuite& suite = default_suite(),
           std::optional<KeyPair> sequencer_keys = std::nullopt)
        : genesis_(std::move(genesis)),
          registry_(registry),
          suite_(suite),
          sequencer_keys_(std::move(sequencer_keys)),
          state_(std::make_shared<const ChainState>(genesis_.initial_state())) {}

    Ledger(const Ledger&) = delete;
    Ledger& operator=(const Ledger&) = delete;

    const Genesis& genesis() const { return genesis_; }
    const FeeSchedule& fees() const { return genesis_.fees; }
    const CryptoSuite& suite() const { return suite_; }
    const Registry& registry() const { return registry_; }

    /// Called with each new block before it becomes visible; throwing aborts the seal.
    void set_seal_hook(SealHook hook) {
        std::lock_guard lock(write_mutex_);
        seal_hook_ = std::move(hook);
    }

    SubmitReceipt submit(const SignedTransaction& tx) {
        std::lock_guard lock(write_mutex_);
        const auto snap = snapshot();
        if (!verify_transaction(tx, suite_)) fail(Errc::BadSignature, "signature does not verify for " + tx.sender.hex());

        const Account acct = snap->account(tx.sender);
        const std::uint64_t expected = acct.nonce + pending_count(tx.sender);
        if (tx.nonce != expected)
            fail(Errc::BadNonce, "nonce " + std::to_string(tx.nonce) + ", expected " + std::to_string(expected));

        if (tx.is_create()) {
            registry_.at(tx.op);
            DeployArgs::decode(tx.args);
        } else if (!snap->contracts.contains(*tx.target)) {
            fail(Errc::UnknownContract, "no contract at " + tx.target->hex());
        }

        const auto fee = genesis_.fees.write_fee(tx.args.size());
        std::uint64_t available = acct.balance - std::min(acct.balance, pending_spend_[tx.sender]);
        charge_fee(available, genesis_.fees, tx.args.size());

        const TxId id = tx_id(tx, suite_);
        pending_spend_[tx.sender] += fee;
        ++pending_nonce_[tx.sender];
        pool_.push_back(tx);
        TxStatus st;
        st.pool_position = pool_.size() - 1;
        {
            std::lock_guard rl(read_mutex_);
            statuses_[id] = st;
        }
        return {id, st.pool_position};
    }

    Block seal_block(std::int64_t timestamp) {
        std::lock_guard lock(write_mutex_);
        const auto snap = snapshot();
        if (genesis_.sequencer && (!sequencer_keys_ || sequencer_keys_->public_key != *genesis_.sequencer))
            fail(Errc::AccessDenied, "only the genesis sequencer may seal blocks");
        if (!blocks_.empty() && timestamp < blocks_.back().timestamp)
            fail(Errc::NonMonotonicTimestamp, "timestamp " + std::to_string(timestamp) + " precedes parent " +
                                                  std::to_string(blocks_.back().timestamp));
        Block block;
        block.height = blocks_.size();
        block.parent_digest = blocks_.empty() ? Digest{} : blocks_.back().digest(suite_);
        block.timestamp = timestamp;
        block.transactions = pool_;

        auto next = std::make_shared<ChainState>(*snap);
        next->current_time = timestamp;
        std::vector<std::pair<TxId, TxStatus>> results;
        for (std::size_t i = 0; i < block.transactions.size(); ++i) {
            auto st = apply(*next, block.transactions[i], timestamp);
            st.height = block.height;
            st.index = static_cast<std::uint32_t>(i);
            results.emplace_back(tx_id(block.transactions[i], suite_), std::move(st));
        }
        block.state_digest = next->digest(suite_);
        if (genesis_.sequencer) block.seal = suite_.sign(block.header_payload(), sequencer_keys_->secret_key);
        if (seal_hook_) seal_hook_(block);

        pool_.clear();
        pending_nonce_.clear();
        pending_spend_.clear();
        publish(std::move(next), block, std::move(results));
        return block;
    }

    /// Verifies and applies a block produced elsewhere. Throws BrokenChain when it
    /// does not extend this chain and StateMismatch when its contents do not
    /// reproduce its recorded state digest.
    void import_block(const Block& block) {
        std::lock_guard lock(write_mutex_);
        const auto snap = snapshot();
        const std::uint64_t h = blocks_.size();
        if (block.height != h)
            throw BlockError(Errc::BrokenChain, h, "block claims height " + std::to_string(block.height));
        const Digest parent = blocks_.empty() ? Digest{} : blocks_.back().digest(suite_);
        if (block.parent_digest != parent) throw BlockError(Errc::BrokenChain, h, "parent digest mismatch");
        if (genesis_.sequencer && !suite_.verify(block.header_payload(), block.seal, *genesis_.sequencer))
            throw BlockError(Errc::StateMismatch, h, "block seal does not verify");
        if (!blocks_.empty() && block.timestamp < blocks_.back().timestamp)
            throw BlockError(Errc::BrokenChain, h, "non-monotonic timestamp");

        auto next = std::make_shared<ChainState>(*snap);
        next->current_time = block.timestamp;
        std::vector<std::pair<TxId, TxStatus>> results;
        for (std::size_t i = 0; i < block.transactions.size(); ++i) {
            const auto& tx = block.transactions[i];
            try {
                validate_for_inclusion(*next, tx);
            } catch (const Error& e) {
                throw BlockError(Errc::StateMismatch, h,
                                 "transaction " + std::to_string(i) + " invalid (" + e.what() + ")");
            }
            auto st = apply(*next, tx, block.timestamp);
            st.height = h;
            st.index = static_cast<std::uint32_t>(i);
            results.emplace_back(tx_id(tx, suite_), std::move(st));
        }
        if (next->digest(suite_) != block.state_digest) throw BlockError(Errc::StateMismatch, h, "state digest mismatch");
        publish(std::move(next), block, std::move(results));
    }

    /// Read-only call at the latest sealed state. Never charges a fee.
    Bytes query(const Address& target, const Address& caller, std::string_view op, ByteView args) const {
        const auto snap = snapshot();
        Host host(registry_, *snap, suite_);
        return host.call(target, CallContext::direct(caller, snap->current_time, true), op, args);
    }

    Bytes query(const Address& target, const Address& caller, const Call& call) const {
        return query(target, caller, call.op, call.args);
    }

    std::shared_ptr<const ChainState> snapshot() const {
        std::lock_guard lock(read_mutex_);
        return state_;
    }

    Digest state_digest() const { return snapshot()->digest(suite_); }

    std::uint64_t height() const {
        std::lock_guard lock(read_mutex_);
        return blocks_.size();
    }

    std::vector<Block> blocks() const {
        std::lock_guard lock(read_mutex_);
        return blocks_;
    }

    std::optional<Block> block(std::uint64_t h) const {
        std::lock_guard lock(read_mutex_);
        if (h >= blocks_.size()) return std::nullopt;
        return blocks_[h];
    }

    std::optional<std::int64_t> last_timestamp() const {
        std::lock_guard lock(read_mutex_);
        if (blocks_.empty()) return std::nullopt;
        return blocks_.back().timestamp;
    }

    std::optional<TxStatus> status(const TxId& id) const {
        std::lock_guard lock(read_mutex_);
        auto it = statuses_.find(id);
        if (it == statuses_.end()) return std::nullopt;
        return it->second;
    }

    Account account(const Address& a) const { return snapshot()->account(a); }

    /// Nonce the next submitted transaction from `a` must carry.
    std::uint64_t next_nonce(const Address& a) const {
        std::lock_guard lock(write_mutex_);
        return snapshot()->account(a).nonce + pending_count(a);
    }

    std::size_t pending() const {
        std::lock_guard lock(write_mutex_);
        return pool_.size();
    }

  private:
    std::uint64_t pending_count(const Address& a) const {
        auto it = pending_nonce_.find(a);
        return it == pending_nonce_.end() ? 0 : it->second;
    }

    void validate_for_inclusion(const ChainState& state, const SignedTransaction& tx) const {
        if (!verify_transaction(tx, suite_)) fail(Errc::BadSignature, "bad signature");
        const auto acct = state.account(tx.sender);
        if (tx.nonce != acct.nonce) fail(Errc::BadNonce, "nonce mismatch");
        std::uint64_t balance = acct.balance;
        charge_fee(balance, genesis_.fees, tx.args.size());
    }

    // Precondition: tx passed validation against `state`.
    TxStatus apply(ChainState& state, const SignedTransaction& tx, std::int64_t block_time) const {
        TxStatus st;
        auto& acct = state.accounts[tx.sender];
        const std::uint64_t nonce = acct.nonce++;
        st.fee = charge_fee(acct.balance, genesis_.fees, tx.args.size());
        state.fees_burned += st.fee;

        Host host(registry_, state, suite_);
        const auto ctx = CallContext::direct(tx.sender, block_time);
        try {
            if (tx.is_create()) {
                const auto addr = host.deploy(ctx, tx.op, DeployArgs::decode(tx.args), nonce);
                st.created = addr;
                st.result.assign(addr.raw().begin(), addr.raw().end());
            } else {
                st.result = host.call(*tx.target, ctx, tx.op, tx.args);
            }
            std::move(host).commit(state);
            st.outcome = TxOutcome::Succeeded;
        } catch (const Error& e) {
            st.outcome = TxOutcome::Failed;
            st.error = e.code();
            st.message = e.detail();
        } catch (const std::exception& e) {
            st.outcome = TxOutcome::Failed;
            st.error = Errc::Malformed;
            st.message = e.what();
        }
        return st;
    }

    void publish(std::shared_ptr<ChainState> next, const Block& block, std::vector<std::pair<TxId, TxStatus>> results) {
        std::lock_guard lock(read_mutex_);
        state_ = std::move(next);
        blocks_.push_back(block);
        for (auto& [id, st] : results) {
            auto it = statuses_.find(id);
            if (it != statuses_.end()) st.pool_position = it->second.pool_position;
            statuses_[id] = std::move(st);
        }
    }

    Genesis genesis_;
    const Registry& registry_;
    const CryptoSuite& suite_;
    std::optional<KeyPair> sequencer_keys_;

    mutable std::mutex write_mutex_;  // serialises submit, seal and import
    std::vector<SignedTransaction> pool_;
    std::unordered_map<Address, std::uint64_t, AddressHash> pending_nonce_;
    std::unordered_map<Address, std::uint64_t, AddressHash> pending_spend_;
    SealHook seal_hook_;

    mutable std::mutex read_mutex_;  // guards the published snapshot, blocks and receipts
    std::shared_ptr<const ChainState> state_;
    std::vector<Block> blocks_;
    std::map<TxId, TxStatus> statuses_;
};

inline ChainState replay(const Genesis& genesis, std::span<const Block> blocks, const Registry& registry,
                         const CryptoSuite& suite = default_suite()) {
    Ledger follower(genesis, registry, suite);
    for (const auto& b : blocks) follower.import_block(b);
    return *follower.snapshot();
}

}  // namespace pimledger
