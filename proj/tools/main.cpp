// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli_app.hpp"

int main(int argc, char** argv) { return pimledger::cli::run_cli(argc, argv); }
