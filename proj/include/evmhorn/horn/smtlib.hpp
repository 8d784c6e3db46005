// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "evmhorn/horn/ir.hpp"

namespace evmhorn::horn
{
/// SMT-LIB 2.6 document in the HORN logic over integers. Constants are
/// encoded as themselves and Top as -1; every operation and guard case-splits
/// on the -1 tag. Only goal clauses of `query` are included. Throws
/// std::invalid_argument when the query is not declared or a term cannot be
/// encoded.
std::string emit_chc_smtlib(const HornSystem& system, const std::string& query);

}  // namespace evmhorn::horn
