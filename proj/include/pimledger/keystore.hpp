// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Local alias -> key mapping. Seeds are stored in the clear, so the file is
// created owner-read/write only. Saving a loaded keystore reproduces the file
// byte for byte.

#include <sys/stat.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pimledger/address.hpp"

namespace pimledger {

class Keystore {
  public:
    static bool valid_alias(std::string_view alias) {
        if (alias.empty() || alias.size() > 64) return false;
        for (char c : alias)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') return false;
        return true;
    }

    const Identity& add(const std::string& alias, const Seed& seed) {
        if (!valid_alias(alias)) fail(Errc::Malformed, "alias must be 1-64 of [A-Za-z0-9._-]");
        if (entries_.contains(alias)) fail(Errc::Malformed, "alias '" + alias + "' already exists");
        return entries_.emplace(alias, Entry{seed, keygen(seed)}).first->second.identity;
    }

    const Identity& generate(const std::string& alias) { return add(alias, random_seed()); }

    const Identity* find(std::string_view alias) const {
        auto it = entries_.find(std::string(alias));
        return it == entries_.end() ? nullptr : &it->second.identity;
    }

    const Identity& at(std::string_view alias) const {
        const auto* id = find(alias);
        if (!id) fail(Errc::NotFound, "no key with alias '" + std::string(alias) + "'");
        return *id;
    }

    /// Alias of the key whose address is `a`, if any.
    std::optional<std::string> alias_of(const Address& a) const {
        for (const auto& [alias, e] : entries_)
            if (e.identity.address == a) return alias;
        return std::nullopt;
    }

    std::vector<std::pair<std::string, Address>> list() const {
        std::vector<std::pair<std::string, Address>> out;
        for (const auto& [alias, e] : entries_) out.emplace_back(alias, e.identity.address);
        return out;
    }

    std::size_t size() const { return entries_.size(); }

    std::string encode() const {
        nlohmann::ordered_json j;
        j["version"] = 1;
        auto& keys = j["keys"] = nlohmann::ordered_json::array();
        for (const auto& [alias, e] : entries_)
            keys.push_back({{"alias", alias}, {"address", e.identity.address.hex()}, {"seed", to_hex(e.seed)}});
        return j.dump(2) + "\n";
    }

    static Keystore decode(std::string_view text) {
        Keystore ks;
        try {
            const auto j = nlohmann::json::parse(text);
            if (j.at("version").get<int>() != 1) fail(Errc::Malformed, "unsupported keystore version");
            for (const auto& k : j.at("keys")) {
                const auto seed_hex = from_hex(k.at("seed").get<std::string>());
                if (!seed_hex || seed_hex->size() != Seed{}.size()) fail(Errc::Malformed, "bad seed in keystore");
                Seed seed{};
                std::copy(seed_hex->begin(), seed_hex->end(), seed.begin());
                const auto& id = ks.add(k.at("alias").get<std::string>(), seed);
                if (k.at("address").get<std::string>() != id.address.hex())
                    fail(Errc::Malformed, "keystore address does not match seed for " + k.at("alias").get<std::string>());
            }
        } catch (const nlohmann::json::exception& e) {
            fail(Errc::Malformed, std::string("keystore: ") + e.what());
        }
        return ks;
    }

    /// A missing file is an empty keystore.
    static Keystore load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            if (!std::filesystem::exists(path)) return {};
            fail(Errc::Io, "cannot read " + path.string());
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        return decode(ss.str());
    }

    void save(const std::filesystem::path& path) const {
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        const auto tmp = path.string() + ".tmp";
        {
            const auto old = ::umask(077);
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            ::umask(old);
            if (!out) fail(Errc::Io, "cannot write " + tmp);
            const auto text = encode();
            out.write(text.data(), static_cast<std::streamsize>(text.size()));
            if (!out.flush()) fail(Errc::Io, "cannot write " + tmp);
        }
        std::filesystem::permissions(tmp, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write,
                                     std::filesystem::perm_options::replace);
        std::filesystem::rename(tmp, path);
    }

  private:
    struct Entry {
        Seed seed;
        Identity identity;
    };
    std::map<std::string, Entry> entries_;
};

}  // namespace pimledger
