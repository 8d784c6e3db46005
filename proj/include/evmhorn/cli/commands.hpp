// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace evmhorn::cli
{
/// Entry point of the evmhorn tool. `args` excludes the program name.
/// Subcommands: analyze, disasm, cfg, emit-chc, emit-ir, regress, minitest.
/// Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evmhorn::cli
