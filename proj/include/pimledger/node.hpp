// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>

#include "pimledger/contracts/registry.hpp"
#include "pimledger/ledger/chain_file.hpp"
#include "pimledger/ledger/ledger.hpp"

namespace pimledger {

using Clock = std::function<std::int64_t()>;

inline Clock system_clock() {
    return [] {
        return static_cast<std::int64_t>(
            std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
                .count());
    };
}

/// Test and dev clock that only moves when told to.
class ManualClock {
  public:
    explicit ManualClock(std::int64_t start = 0) : now_(std::make_shared<std::atomic<std::int64_t>>(start)) {}

    std::int64_t now() const { return now_->load(); }
    void set(std::int64_t t) { now_->store(t); }
    void advance(std::int64_t dt) { now_->fetch_add(dt); }
    Clock clock() const {
        return [now = now_] { return now->load(); };
    }

  private:
    std::shared_ptr<std::atomic<std::int64_t>> now_;
};

/// A sequencer: ledger, injected clock and an optional chain file that every
/// sealed block is appended to before it becomes visible.
class Node {
  public:
    Node(Genesis genesis, Clock clock, std::optional<KeyPair> sequencer_keys = std::nullopt,
         const Registry& registry = default_registry())
        : ledger_(std::make_unique<Ledger>(std::move(genesis), registry, default_suite(), std::move(sequencer_keys))),
          clock_(std::move(clock)) {}

    static std::unique_ptr<Node> create(const std::filesystem::path& path, Genesis genesis, Clock clock,
                                        std::optional<KeyPair> sequencer_keys = std::nullopt,
                                        const Registry& registry = default_registry()) {
        auto node = std::make_unique<Node>(genesis, std::move(clock), std::move(sequencer_keys), registry);
        ChainFile::create(path, {node->ledger().suite().name, std::move(genesis)});
        node->attach(path);
        return node;
    }

    /// Rebuilds state by verified replay of an existing chain file.
    /// Without keys the node can follow and answer queries but not seal.
    static std::unique_ptr<Node> open(const std::filesystem::path& path, Clock clock,
                                      std::optional<KeyPair> sequencer_keys = std::nullopt,
                                      const Registry& registry = default_registry()) {
        auto contents = ChainFile::load(path);
        auto node = std::make_unique<Node>(contents.header.genesis, std::move(clock), std::move(sequencer_keys), registry);
        if (contents.header.suite != node->ledger().suite().name)
            fail(Errc::Malformed, "chain uses crypto suite " + contents.header.suite);
        for (const auto& b : contents.blocks) node->ledger().import_block(b);
        node->attach(path);
        return node;
    }

    static std::unique_ptr<Node> open_or_create(const std::filesystem::path& path, Genesis genesis, Clock clock,
                                                std::optional<KeyPair> sequencer_keys = std::nullopt,
                                                const Registry& registry = default_registry()) {
        if (std::filesystem::exists(path)) return open(path, std::move(clock), std::move(sequencer_keys), registry);
        return create(path, std::move(genesis), std::move(clock), std::move(sequencer_keys), registry);
    }

    Ledger& ledger() { return *ledger_; }
    const Ledger& ledger() const { return *ledger_; }
    std::int64_t now() const { return clock_(); }
    const std::optional<std::filesystem::path>& chain_path() const { return path_; }

    Block seal() { return ledger_->seal_block(clock_()); }
    Block seal_at(std::int64_t t) { return ledger_->seal_block(t); }

  private:
    void attach(const std::filesystem::path& path) {
        path_ = path;
        ledger_->set_seal_hook([path](const Block& b) { ChainFile::append(path, b); });
    }

    std::unique_ptr<Ledger> ledger_;
    Clock clock_;
    std::optional<std::filesystem::path> path_;
};

}  // namespace pimledger
