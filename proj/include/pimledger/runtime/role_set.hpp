// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>

#include "pimledger/codec.hpp"
#include "pimledger/runtime/contract.hpp"

namespace pimledger {

using RoleId = std::string;
inline const RoleId kDefaultAdminRole = "DEFAULT_ADMIN_ROLE";

/// Role membership in the AccessControl style: admin-role members manage all
/// roles; duplicate grants and revokes of non-members are no-ops.
class RoleSet {
  public:
    RoleSet() = default;

    static RoleSet with_admin(const Address& admin) {
        RoleSet rs;
        rs.roles_[kDefaultAdminRole].insert(admin);
        return rs;
    }

    bool has_role(const RoleId& role, const Address& account) const {
        auto it = roles_.find(role);
        return it != roles_.end() && it->second.contains(account);
    }

    void grant_role(const CallContext& ctx, const RoleId& role, const Address& account) {
        require_admin(ctx);
        roles_[role].insert(account);
    }

    void revoke_role(const CallContext& ctx, const RoleId& role, const Address& account) {
        require_admin(ctx);
        auto it = roles_.find(role);
        if (it == roles_.end()) return;
        it->second.erase(account);
        if (it->second.empty()) roles_.erase(it);
    }

    std::set<Address> members(const RoleId& role) const {
        auto it = roles_.find(role);
        return it == roles_.end() ? std::set<Address>{} : it->second;
    }

    void encode(Writer& w) const {
        w.count(roles_.size());
        for (const auto& [role, members] : roles_) {
            w.str(role).count(members.size());
            for (const auto& m : members) write_address(w, m);
        }
    }

    static RoleSet decode(Reader& r) {
        RoleSet rs;
        const auto n = r.count(8);
        for (std::uint32_t i = 0; i < n; ++i) {
            auto role = r.str();
            const auto m = r.count(Address::kSize);
            auto& members = rs.roles_[role];
            for (std::uint32_t j = 0; j < m; ++j) members.insert(read_address(r));
        }
        return rs;
    }

    bool operator==(const RoleSet&) const = default;

  private:
    void require_admin(const CallContext& ctx) const {
        if (!has_role(kDefaultAdminRole, ctx.msg_sender))
            fail(Errc::AccessDenied, ctx.msg_sender.hex() + " lacks " + kDefaultAdminRole);
    }

    std::map<RoleId, std::set<Address>> roles_;
};

}  // namespace pimledger
