// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The pimledger command line. Every subcommand builds one module call and
// hands it to a backend: either an embedded node replaying a local chain file
// (writes are sealed immediately) or a remote gateway.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pimledger/contracts/registry.hpp"
#include "pimledger/gateway/client.hpp"
#include "pimledger/gateway/gateway.hpp"
#include "pimledger/keystore.hpp"
#include "pimledger/node.hpp"
#include "pimledger/scorecard/answers_file.hpp"

namespace pimledger::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTransport = 3;
inline constexpr int kExitRejected = 4;

// Bad flags or values the user typed.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A ledger or contract refused the operation.
class Rejection : public Error {
  public:
    explicit Rejection(const Error& e) : Error(e.code(), e.detail()) {}
};

inline std::atomic<bool>& stop_flag() {
    static std::atomic<bool> flag{false};
    return flag;
}

struct SealInfo {
    std::uint64_t height = 0;
    Digest state_digest{};
};

class Backend {
  public:
    virtual ~Backend() = default;
    virtual std::uint64_t next_nonce(const Address& a) = 0;
    /// Submits and waits for inclusion; a failed transaction is returned, not thrown.
    virtual TxStatus execute(const SignedTransaction& tx) = 0;
    virtual Bytes query(const Address& contract, const Address& caller, const Call& call) = 0;
    virtual std::string feed(const Address& contract, const Address& user) = 0;
    virtual SealInfo seal() = 0;

    template <class F>
    static auto guarded(F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const Rejection&) {
            throw;
        } catch (const Error& e) {
            if (e.code() == Errc::Transport || e.code() == Errc::Io) throw;
            throw Rejection(e);
        }
    }
};

class EmbeddedBackend final : public Backend {
  public:
    explicit EmbeddedBackend(std::unique_ptr<Node> node) : node_(std::move(node)) {}

    std::uint64_t next_nonce(const Address& a) override { return node_->ledger().next_nonce(a); }

    TxStatus execute(const SignedTransaction& tx) override {
        return guarded([&] {
            const auto receipt = node_->ledger().submit(tx);
            node_->seal();
            return *node_->ledger().status(receipt.id);
        });
    }

    Bytes query(const Address& contract, const Address& caller, const Call& call) override {
        return guarded([&] { return node_->ledger().query(contract, caller, call); });
    }

    std::string feed(const Address& contract, const Address& user) override {
        return cal_store::decode_string(query(contract, user, cal_store::get_events_ical()));
    }

    SealInfo seal() override {
        return guarded([&] {
            const auto b = node_->seal();
            return SealInfo{b.height, b.state_digest};
        });
    }

    Node& node() { return *node_; }

  private:
    std::unique_ptr<Node> node_;
};

class RemoteBackend final : public Backend {
  public:
    RemoteBackend(const std::string& url, std::chrono::milliseconds wait) : client_(url), wait_(wait) {}

    std::uint64_t next_nonce(const Address& a) override { return client_.account(a).next_nonce; }

    TxStatus execute(const SignedTransaction& tx) override {
        return guarded([&] {
            const auto receipt = client_.submit(tx);
            if (client_.head().dev_mode) client_.seal();
            const auto deadline = std::chrono::steady_clock::now() + wait_;
            for (;;) {
                auto st = client_.status(receipt.id);
                if (st && st->outcome != TxOutcome::Pending) return *st;
                if (std::chrono::steady_clock::now() >= deadline)
                    fail(Errc::Transport, "timed out waiting for " + to_hex(receipt.id) + " to be sealed");
                std::this_thread::sleep_for(std::chrono::milliseconds(100));
            }
        });
    }

    Bytes query(const Address& contract, const Address& caller, const Call& call) override {
        return guarded([&] { return client_.query(contract, caller, call); });
    }

    std::string feed(const Address& contract, const Address& user) override {
        return guarded([&] { return client_.feed(contract, user); });
    }

    SealInfo seal() override {
        return guarded([&] {
            const auto h = client_.seal();
            return SealInfo{h, client_.head().state_digest};
        });
    }

  private:
    GatewayClient client_;
    std::chrono::milliseconds wait_;
};

inline std::string default_keystore_path() {
    if (const char* home = std::getenv("HOME")) return std::string(home) + "/.pimledger/keys.json";
    return ".pimledger/keys.json";
}

struct GlobalOptions {
    std::string keystore = default_keystore_path();
    std::string chain;
    std::string gateway;
    std::string now;
    std::string sequencer = "sequencer";
    std::uint64_t fee_base = 0;
    std::uint64_t fee_per_byte = 0;
    std::uint64_t initial_balance = 1'000'000'000'000ULL;
    double wait_seconds = 30;
    bool json = false;
};

inline std::int64_t parse_time_flag(const std::string& text, std::string_view flag) {
    try {
        return parse_human_time(text);
    } catch (const Error& e) {
        throw UsageError(std::string(flag) + ": " + e.detail());
    }
}

inline std::optional<std::int64_t> parse_bound(const std::string& text, std::string_view flag) {
    if (text.empty()) return std::nullopt;
    return parse_time_flag(text, flag);
}

class Session {
  public:
    Session(GlobalOptions opts, std::ostream& out) : opts_(std::move(opts)), out_(out) {}

    Keystore& keystore() {
        if (!keystore_) keystore_ = Keystore::load(opts_.keystore);
        return *keystore_;
    }
    void save_keystore() { keystore().save(opts_.keystore); }

    std::optional<KeyPair> sequencer_keys() {
        if (const auto* id = keystore().find(opts_.sequencer)) return id->keys;
        return std::nullopt;
    }

    Clock clock() const {
        if (opts_.now.empty()) return system_clock();
        const auto t = parse_time_flag(opts_.now, "--now");
        return [t] { return t; };
    }

    // Parameters for a chain file that does not exist yet. Every key in the
    // keystore is funded; the sequencer key is created if missing.
    Genesis new_genesis() {
        if (!keystore().find(opts_.sequencer)) {
            keystore().generate(opts_.sequencer);
            save_keystore();
        }
        Genesis g;
        g.fees = {opts_.fee_base, opts_.fee_per_byte};
        for (const auto& [alias, addr] : keystore().list()) g.allocations.emplace_back(addr, opts_.initial_balance);
        g.sequencer = keystore().at(opts_.sequencer).keys.public_key;
        return g;
    }

    std::unique_ptr<Node> open_node() {
        if (opts_.chain.empty()) throw UsageError("no chain file: pass --chain or set PIMLEDGER_CHAIN");
        if (std::filesystem::exists(opts_.chain)) return Node::open(opts_.chain, clock(), sequencer_keys());
        auto genesis = new_genesis();
        return Node::create(opts_.chain, std::move(genesis), clock(), sequencer_keys());
    }

    Backend& backend() {
        if (backend_) return *backend_;
        if (!opts_.gateway.empty()) {
            backend_ = std::make_unique<RemoteBackend>(
                opts_.gateway, std::chrono::milliseconds(static_cast<std::int64_t>(opts_.wait_seconds * 1000)));
        } else if (!opts_.chain.empty()) {
            backend_ = std::make_unique<EmbeddedBackend>(open_node());
        } else {
            throw UsageError("no backend: pass --chain FILE or --gateway URL (or PIMLEDGER_CHAIN / PIMLEDGER_GATEWAY)");
        }
        return *backend_;
    }

    const Identity& signer(const std::string& alias) {
        if (alias.rfind("0x", 0) == 0) throw UsageError("signing needs a keystore alias, not an address: " + alias);
        const auto* id = keystore().find(alias);
        if (!id) throw UsageError("no key with alias '" + alias + "' in " + opts_.keystore);
        return *id;
    }

    Address resolve(const std::string& who) {
        if (who.rfind("0x", 0) == 0) {
            auto a = Address::parse(who);
            if (!a) throw UsageError("bad address: " + who);
            return *a;
        }
        const auto* id = keystore().find(who);
        if (!id) throw UsageError("'" + who + "' is neither an address nor a keystore alias");
        return id->address;
    }

    /// Signs, submits and waits; failed transactions become a Rejection.
    TxStatus transact(const std::string& alias, std::optional<Address> target, const Call& call) {
        const auto& who = signer(alias);
        auto& b = backend();
        const auto nonce = b.next_nonce(who.address);
        const auto tx = make_transaction(who, nonce, target, call.op, call.args);
        auto st = b.execute(tx);
        if (st.outcome == TxOutcome::Failed)
            throw Rejection(Error(st.error.value_or(Errc::Malformed), st.message + " (included at height " +
                                                                          std::to_string(st.height.value_or(0)) +
                                                                          ", fee " + std::to_string(st.fee) + ")"));
        return st;
    }

    const GlobalOptions& opts() const { return opts_; }
    std::ostream& out() { return out_; }

  private:
    GlobalOptions opts_;
    std::ostream& out_;
    std::optional<Keystore> keystore_;
    std::unique_ptr<Backend> backend_;
};

inline void print_event_lines(std::ostream& out, const std::vector<CalendarEvent>& events) {
    for (const auto& e : events)
        out << e.uid << '\t' << format_iso8601(e.dtstart) << '\t' << format_iso8601(e.dtend) << '\t' << e.summary
            << '\n';
}

inline std::string level_text(const cal_auth::RoleGrant& g) {
    std::string s(cal_auth::to_string(g.level));
    s += '\t';
    s += g.not_before ? format_iso8601(*g.not_before) : "-";
    s += '\t';
    s += g.not_after ? format_iso8601(*g.not_after) : "-";
    return s;
}

// node follow: verify every block of a chain file, then keep tailing it.
inline int follow_chain(const std::filesystem::path& path, bool once, std::chrono::milliseconds poll, bool json,
                        std::ostream& out) {
    Bytes data = ChainFile::read_all(path);
    ChainReader reader(data);
    Ledger ledger(reader.header().genesis, default_registry());
    if (reader.header().suite != ledger.suite().name)
        fail(Errc::Malformed, "chain uses crypto suite " + reader.header().suite);

    std::vector<std::size_t> frame_ends;  // end offset of every verified frame
    Bytes verified(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(reader.offset()));
    const auto report = [&](const Block& b) {
        if (json) {
            out << wire::Json{{"height", b.height},
                              {"timestamp", b.timestamp},
                              {"transactions", b.transactions.size()},
                              {"state_digest", to_hex(b.state_digest)}}
                       .dump()
                << '\n';
        } else {
            out << "block " << b.height << ' ' << format_iso8601(b.timestamp) << " txs " << b.transactions.size()
                << " state " << to_hex(b.state_digest) << '\n';
        }
        out.flush();
    };

    for (;;) {
        if (data.size() < verified.size() || !std::equal(verified.begin(), verified.end(), data.begin())) {
            std::uint64_t h = 0;
            while (h < frame_ends.size() && data.size() >= frame_ends[h] &&
                   std::equal(verified.begin(), verified.begin() + static_cast<std::ptrdiff_t>(frame_ends[h]),
                              data.begin()))
                ++h;
            throw BlockError(Errc::BrokenChain, h, "already-verified chain data changed");
        }
        for (const auto& b : reader.next_blocks(data)) {
            ledger.import_block(b);
            frame_ends.push_back(reader.offset());
            report(b);
        }
        verified.assign(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(reader.offset()));
        if (once) {
            if (reader.offset() != data.size())
                throw BlockError(Errc::StateMismatch, ledger.height(), "truncated block frame");
            out << "verified " << ledger.height() << " blocks state " << to_hex(ledger.state_digest()) << '\n';
            return kExitOk;
        }
        if (stop_flag().load()) return kExitOk;
        std::this_thread::sleep_for(poll);
        data = ChainFile::read_all(path);
    }
}

inline void on_stop_signal(int) { stop_flag().store(true); }

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    GlobalOptions g;
    CLI::App app{"pimledger: calendar and message contracts on a single-sequencer ledger", "pimledger"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--keystore", g.keystore, "Keystore file")->envname("PIMLEDGER_KEYSTORE");
    app.add_option("--chain", g.chain, "Chain file for the embedded backend")->envname("PIMLEDGER_CHAIN");
    app.add_option("--gateway", g.gateway, "Gateway base URL, e.g. http://127.0.0.1:8645")
        ->envname("PIMLEDGER_GATEWAY");
    app.add_option("--now", g.now, "Block time for embedded seals (default: system clock)");
    app.add_option("--sequencer", g.sequencer, "Keystore alias of the sequencer key")->capture_default_str();
    app.add_option("--fee-base", g.fee_base, "Write fee base for a new chain")->capture_default_str();
    app.add_option("--fee-per-byte", g.fee_per_byte, "Write fee per argument byte for a new chain")
        ->capture_default_str();
    app.add_option("--initial-balance", g.initial_balance, "Balance of each keystore key in a new chain")
        ->capture_default_str();
    app.add_option("--wait", g.wait_seconds, "Seconds to wait for a gateway transaction to be sealed")
        ->capture_default_str();
    app.add_flag("--json", g.json, "Machine-readable output");

    // key
    auto* key = app.add_subcommand("key", "Manage signing keys")->require_subcommand(1);
    std::string alias;
    auto* key_new = key->add_subcommand("new", "Generate a key");
    key_new->add_option("alias", alias, "Alias for the new key")->required();
    auto* key_list = key->add_subcommand("list", "List keys");

    // node
    auto* node = app.add_subcommand("node", "Run or follow a chain")->require_subcommand(1);
    std::string listen = "127.0.0.1:8645";
    bool dev = false;
    double block_interval = 2, heartbeat = 60, serve_for = 0;
    auto* node_run = node->add_subcommand("run", "Host the gateway and sequencer");
    node_run->add_option("--listen", listen, "host:port to bind")->capture_default_str();
    node_run->add_flag("--dev", dev, "Enable /admin/seal");
    node_run->add_option("--block-interval", block_interval, "Seconds between seals of pending transactions")
        ->capture_default_str();
    node_run->add_option("--heartbeat", heartbeat, "Seconds between empty blocks (0: never)")->capture_default_str();
    node_run->add_option("--serve-for", serve_for, "Exit after this many seconds (0: until signalled)");
    bool once = false;
    std::uint64_t poll_ms = 500;
    auto* node_follow = node->add_subcommand("follow", "Verify a chain file and keep tailing it");
    node_follow->add_flag("--once", once, "Verify what is there and exit");
    node_follow->add_option("--poll-ms", poll_ms, "Poll interval")->capture_default_str();

    // deploy
    auto* deploy = app.add_subcommand("deploy", "Deploy a contract")->require_subcommand(1);
    std::string as;
    std::uint64_t quota = 0, text_limit = 0;
    std::string store;
    bool overlap = false;
    auto add_as = [&](CLI::App* c, const char* what) { c->add_option("--as", as, what)->required(); };
    auto* dep_store = deploy->add_subcommand("cal-store", "Per-address calendar store");
    auto* dep_auth = deploy->add_subcommand("cal-auth", "Authorisation proxy over a cal-store");
    auto* dep_msg = deploy->add_subcommand("msg-store", "Time-locked message store");
    for (auto* c : {dep_store, dep_auth, dep_msg}) {
        add_as(c, "Deployer alias");
        c->add_option("--quota", quota, "Storage quota in bytes (0: default 24576)");
    }
    dep_store->add_option("--text-limit", text_limit, "Summary+description byte limit");
    dep_auth->add_option("--store", store, "Address of the cal-store to front")->required();
    dep_auth->add_flag("--overlap", overlap, "Read windows match overlapping events, not just DTSTART");

    // event
    std::string contract;
    auto add_contract = [&](CLI::App* c) {
        c->add_option("--contract", contract, "Contract address")->required()->envname("PIMLEDGER_CONTRACT");
    };
    auto* event = app.add_subcommand("event", "Calendar events")->require_subcommand(1);
    std::string start, end, summary, description, uid;
    bool ics = false;
    auto* ev_add = event->add_subcommand("add", "Store an event");
    add_contract(ev_add);
    add_as(ev_add, "Signer alias");
    ev_add->add_option("--start", start, "DTSTART")->required();
    ev_add->add_option("--end", end, "DTEND")->required();
    ev_add->add_option("--summary", summary, "SUMMARY")->required();
    ev_add->add_option("--description", description, "DESCRIPTION");
    auto* ev_rm = event->add_subcommand("rm", "Remove an event");
    add_contract(ev_rm);
    add_as(ev_rm, "Signer alias");
    ev_rm->add_option("--uid", uid, "Event UID")->required();
    auto* ev_list = event->add_subcommand("list", "List events visible to an account");
    add_contract(ev_list);
    add_as(ev_list, "Alias or address to read as");
    ev_list->add_flag("--ics", ics, "Print the iCalendar document");

    // msg
    auto* msg = app.add_subcommand("msg", "Time-locked messages")->require_subcommand(1);
    std::string body, unlock;
    bool all_slots = false;
    auto* msg_add = msg->add_subcommand("add", "Store a message");
    add_contract(msg_add);
    add_as(msg_add, "Signer alias");
    msg_add->add_option("--body", body, "Message text")->required();
    msg_add->add_option("--unlock", unlock, "Release time")->required();
    auto* msg_list = msg->add_subcommand("list", "List released messages");
    add_contract(msg_list);
    add_as(msg_list, "Alias or address to read as");
    msg_list->add_flag("--all", all_slots, "Also show still-locked slots");

    // grant
    auto* grant = app.add_subcommand("grant", "Access grants on a cal-auth contract")->require_subcommand(1);
    std::string level, from, to, to_addr;
    auto* gr_add = grant->add_subcommand("add", "Grant or replace access");
    add_contract(gr_add);
    add_as(gr_add, "Admin alias");
    gr_add->add_option("--level", level, "read or write")->required();
    gr_add->add_option("--from", from, "Window start (default: open)");
    gr_add->add_option("--to", to, "Window end (default: open)");
    gr_add->add_option("--to-addr", to_addr, "Grantee address or alias")->required();
    auto* gr_rm = grant->add_subcommand("rm", "Revoke access");
    add_contract(gr_rm);
    add_as(gr_rm, "Admin alias");
    gr_rm->add_option("--to-addr", to_addr, "Grantee address or alias")->required();
    auto* gr_list = grant->add_subcommand("list", "Show owner and grants");
    add_contract(gr_list);

    auto* transfer = app.add_subcommand("transfer-owner", "Hand a cal-auth contract to a new owner");
    add_contract(transfer);
    add_as(transfer, "Current owner alias");
    transfer->add_option("--to-addr", to_addr, "New owner address or alias")->required();

    auto* feed = app.add_subcommand("feed", "iCalendar feeds")->require_subcommand(1);
    std::string user;
    auto* feed_get = feed->add_subcommand("get", "Fetch the feed for a user");
    add_contract(feed_get);
    feed_get->add_option("--user", user, "Address or alias")->required();

    auto* score_cmd = app.add_subcommand("scorecard", "Digital preservation scorecard")->require_subcommand(1);
    std::string answers_path, rubric_path;
    auto* sc_run = score_cmd->add_subcommand("run", "Score an answers file");
    sc_run->add_option("answers", answers_path, "Answers file (TOML)")->required();
    sc_run->add_option("--rubric", rubric_path, "Rubric JSON (default: built-in)");

    auto* seal = app.add_subcommand("seal", "Seal the pending transactions into a block");

    const auto emit_error = [&](std::string_view code, const std::string& message, int exit_code) {
        err << wire::Json{{"error", code}, {"exit", exit_code}, {"message", message}}.dump() << '\n';
        return exit_code;
    };

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        auto message = std::string(e.what());
        for (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub;) {
            if (sub->get_subcommands().empty()) {
                message += " (see '" + sub->get_name() + " --help')";
                break;
            }
            sub = sub->get_subcommands().front();
        }
        return emit_error("Usage", message, kExitUsage);
    }

    Session s(g, out);
    const bool json = g.json;
    try {
        if (key_new->parsed()) {
            const auto& id = s.keystore().generate(alias);
            s.save_keystore();
            if (json)
                out << wire::Json{{"alias", alias}, {"address", id.address.hex()}}.dump() << '\n';
            else
                out << alias << '\t' << id.address.hex() << '\n';
        } else if (key_list->parsed()) {
            auto arr = wire::Json::array();
            for (const auto& [a, addr] : s.keystore().list()) {
                if (json)
                    arr.push_back({{"alias", a}, {"address", addr.hex()}});
                else
                    out << a << '\t' << addr.hex() << '\n';
            }
            if (json) out << arr.dump() << '\n';
        } else if (node_run->parsed()) {
            const auto colon = listen.rfind(':');
            if (colon == std::string::npos) throw UsageError("--listen wants host:port");
            int port = 0;
            try {
                port = std::stoi(listen.substr(colon + 1));
            } catch (const std::exception&) {
                throw UsageError("--listen wants host:port");
            }
            auto n = s.open_node();
            if (!s.sequencer_keys()) throw UsageError("sequencer alias '" + g.sequencer + "' is not in the keystore");
            Gateway gw(*n, GatewayOptions{dev, "*"});
            const int bound = gw.start(listen.substr(0, colon), port);
            out << "listening http://" << listen.substr(0, colon) << ':' << bound << " height "
                << n->ledger().height() << '\n';
            out.flush();

            stop_flag().store(false);
            auto prev_int = std::signal(SIGINT, on_stop_signal);
            auto prev_term = std::signal(SIGTERM, on_stop_signal);
            const auto started = std::chrono::steady_clock::now();
            auto last_seal = started;
            const auto secs = [](double v) {
                return std::chrono::milliseconds(static_cast<std::int64_t>(v * 1000));
            };
            while (!stop_flag().load()) {
                const auto now = std::chrono::steady_clock::now();
                if (serve_for > 0 && now - started >= secs(serve_for)) break;
                const bool due = now - last_seal >= secs(block_interval) && n->ledger().pending() > 0;
                const bool beat = heartbeat > 0 && now - last_seal >= secs(heartbeat);
                if (due || beat) {
                    try {
                        const auto b = n->seal();
                        if (json)
                            out << wire::Json{{"height", b.height}, {"transactions", b.transactions.size()}}.dump()
                                << '\n';
                        else
                            out << "sealed " << b.height << " txs " << b.transactions.size() << '\n';
                        out.flush();
                    } catch (const Error& e) {
                        // A clock step backwards just delays the next block.
                        err << wire::Json{{"warning", to_string(e.code())}, {"message", e.detail()}}.dump() << '\n';
                    }
                    last_seal = now;
                }
                std::this_thread::sleep_for(std::chrono::milliseconds(20));
            }
            gw.stop();
            std::signal(SIGINT, prev_int);
            std::signal(SIGTERM, prev_term);
        } else if (node_follow->parsed()) {
            if (g.chain.empty()) throw UsageError("no chain file: pass --chain or set PIMLEDGER_CHAIN");
            stop_flag().store(false);
            auto prev_int = std::signal(SIGINT, on_stop_signal);
            const int rc = follow_chain(g.chain, once, std::chrono::milliseconds(poll_ms), json, out);
            std::signal(SIGINT, prev_int);
            return rc;
        } else if (deploy->parsed()) {
            std::string kind;
            Bytes init;
            if (dep_store->parsed()) {
                kind = cal_store::kKind;
                if (text_limit) init = cal_store::init_args(text_limit);
            } else if (dep_auth->parsed()) {
                kind = cal_auth::kKind;
                init = cal_auth::init_args(s.resolve(store),
                                           overlap ? cal_auth::FilterMode::Overlap : cal_auth::FilterMode::Dtstart);
            } else {
                kind = msg_time_store::kKind;
            }
            const auto st = s.transact(as, std::nullopt, Call{kind, DeployArgs{quota, std::move(init)}.encode()});
            if (json)
                out << wire::Json{{"kind", kind}, {"address", st.created->hex()}, {"height", *st.height}}.dump() << '\n';
            else
                out << st.created->hex() << '\n';
        } else if (ev_add->parsed()) {
            const auto c = s.resolve(contract);
            const auto call = cal_store::store_event(parse_time_flag(start, "--start"), parse_time_flag(end, "--end"),
                                                     summary, description);
            const auto st = s.transact(as, c, call);
            const auto new_uid = cal_store::decode_string(st.result);
            if (json)
                out << wire::Json{{"uid", new_uid}, {"height", *st.height}}.dump() << '\n';
            else
                out << new_uid << '\n';
        } else if (ev_rm->parsed()) {
            const auto st = s.transact(as, s.resolve(contract), cal_store::remove_event(uid));
            if (json)
                out << wire::Json{{"removed", uid}, {"height", *st.height}}.dump() << '\n';
            else
                out << "removed " << uid << '\n';
        } else if (ev_list->parsed()) {
            const auto c = s.resolve(contract);
            const auto reader = s.resolve(as);
            if (ics) {
                out << cal_store::decode_string(s.backend().query(c, reader, cal_store::get_events_ical()));
            } else {
                const auto events = decode_events(s.backend().query(c, reader, cal_store::get_events_obj()));
                if (json)
                    out << wire::to_json(events).dump() << '\n';
                else
                    print_event_lines(out, events);
            }
        } else if (msg_add->parsed()) {
            const auto st = s.transact(as, s.resolve(contract),
                                       msg_time_store::store_msg(body, parse_time_flag(unlock, "--unlock")));
            const auto id = msg_time_store::decode_id(st.result);
            if (json)
                out << wire::Json{{"id", id}, {"height", *st.height}}.dump() << '\n';
            else
                out << id << '\n';
        } else if (msg_list->parsed()) {
            const auto msgs = msg_time_store::decode_messages(
                s.backend().query(s.resolve(contract), s.resolve(as), msg_time_store::get_msg_timed()));
            auto arr = wire::Json::array();
            for (std::size_t i = 0; i < msgs.size(); ++i) {
                const auto& m = msgs[i];
                if (m.is_empty_slot() && !all_slots) continue;
                if (json) {
                    arr.push_back(wire::to_json(m));
                } else if (m.is_empty_slot()) {
                    out << "-\tlocked\t(slot " << i + 1 << ")\n";
                } else {
                    out << m.id << '\t' << format_iso8601(m.unlock_time) << '\t' << m.body << '\n';
                }
            }
            if (json) out << arr.dump() << '\n';
        } else if (gr_add->parsed()) {
            const auto lvl = cal_auth::parse_level(level);
            if (!lvl || (*lvl != cal_auth::AccessLevel::Read && *lvl != cal_auth::AccessLevel::Write))
                throw UsageError("--level must be read or write");
            const auto grantee = s.resolve(to_addr);
            const auto nb = parse_bound(from, "--from");
            auto na = parse_bound(to, "--to");
            // A bare date as the window end means the whole of that day.
            if (na && to.size() == 10) *na += 86399;
            s.transact(as, s.resolve(contract), cal_auth::grant_access(grantee, *lvl, nb, na));
            const cal_auth::RoleGrant granted{grantee, *lvl, nb, na};
            if (json)
                out << wire::to_json(granted).dump() << '\n';
            else
                out << grantee.hex() << '\t' << level_text(granted) << '\n';
        } else if (gr_rm->parsed()) {
            const auto grantee = s.resolve(to_addr);
            s.transact(as, s.resolve(contract), cal_auth::revoke_access(grantee));
            if (json)
                out << wire::Json{{"revoked", grantee.hex()}}.dump() << '\n';
            else
                out << "revoked " << grantee.hex() << '\n';
        } else if (gr_list->parsed()) {
            const auto c = s.resolve(contract);
            const Address anyone{};
            const auto owner = cal_auth::decode_address(s.backend().query(c, anyone, cal_auth::owner()));
            const auto grants = cal_auth::decode_grants(s.backend().query(c, anyone, cal_auth::list_grants()));
            if (json) {
                auto arr = wire::Json::array();
                for (const auto& gr : grants) arr.push_back(wire::to_json(gr));
                out << wire::Json{{"owner", owner.hex()}, {"grants", arr}}.dump() << '\n';
            } else {
                out << owner.hex() << "\tadmin\t-\t-\n";
                for (const auto& gr : grants) out << gr.account.hex() << '\t' << level_text(gr) << '\n';
            }
        } else if (transfer->parsed()) {
            const auto new_owner = s.resolve(to_addr);
            s.transact(as, s.resolve(contract), cal_auth::transfer_cal_auth(new_owner));
            if (json)
                out << wire::Json{{"owner", new_owner.hex()}}.dump() << '\n';
            else
                out << "owner " << new_owner.hex() << '\n';
        } else if (feed_get->parsed()) {
            out << s.backend().feed(s.resolve(contract), s.resolve(user));
        } else if (sc_run->parsed()) {
            const auto text_of = [](const std::string& path) {
                const auto bytes = detail::read_file(path);
                return std::string(bytes.begin(), bytes.end());
            };
            const auto rubric =
                rubric_path.empty() ? scorecard::builtin_rubric() : scorecard::Rubric::from_json(text_of(rubric_path));
            const auto text = text_of(answers_path);
            const auto sheet = scorecard::parse_answers(text, rubric);
            const auto result = sheet.evaluate();
            if (json)
                out << scorecard::render_json(sheet, result, rubric).dump(2) << '\n';
            else
                out << scorecard::render_text(sheet, result, rubric);
        } else if (seal->parsed()) {
            const auto info = s.backend().seal();
            if (json)
                out << wire::Json{{"height", info.height}, {"state_digest", to_hex(info.state_digest)}}.dump() << '\n';
            else
                out << "sealed " << info.height << " state " << to_hex(info.state_digest) << '\n';
        }
    } catch (const UsageError& e) {
        return emit_error("Usage", e.what(), kExitUsage);
    } catch (const Rejection& e) {
        return emit_error(to_string(e.code()), e.detail(), kExitRejected);
    } catch (const BlockError& e) {
        return emit_error(to_string(e.code()), e.detail(), kExitFailure);
    } catch (const Error& e) {
        const int rc = e.code() == Errc::Transport ? kExitTransport : kExitFailure;
        return emit_error(to_string(e.code()), e.detail(), rc);
    } catch (const nlohmann::json::exception& e) {
        return emit_error("Malformed", e.what(), kExitFailure);
    } catch (const std::filesystem::filesystem_error& e) {
        return emit_error("Io", e.what(), kExitFailure);
    }
    return kExitOk;
}

inline int run_cli(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(std::move(args), out, err);
}

}  // namespace pimledger::cli
