// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pimledger/civil_time.hpp"
#include "pimledger/contracts/cal_auth.hpp"
#include "pimledger/contracts/cal_store.hpp"
#include "pimledger/contracts/msg_time_store.hpp"
#include "pimledger/contracts/registry.hpp"
#include "pimledger/gateway/client.hpp"
#include "pimledger/gateway/gateway.hpp"
#include "pimledger/ical.hpp"
#include "pimledger/keystore.hpp"
#include "pimledger/ledger/chain_file.hpp"
#include "pimledger/ledger/ledger.hpp"
#include "pimledger/node.hpp"
#include "pimledger/scorecard/answers_file.hpp"
#include "pimledger/scorecard/scorecard.hpp"
