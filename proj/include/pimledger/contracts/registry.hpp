// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pimledger/contracts/cal_auth.hpp"
#include "pimledger/contracts/cal_store.hpp"
#include "pimledger/contracts/msg_time_store.hpp"

namespace pimledger {

inline const Registry& default_registry() {
    static const Registry registry = [] {
        Registry r;
        r.add(msg_time_store::kind()).add(cal_store::kind()).add(cal_auth::kind());
        return r;
    }();
    return registry;
}

}  // namespace pimledger
