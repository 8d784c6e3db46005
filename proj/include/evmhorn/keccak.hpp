// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace evmhorn
{
/// Keccak-256 with the original (pre-SHA3) 0x01 padding, as used by the EVM.
std::array<uint8_t, 32> keccak256(std::span<const uint8_t> data);
}  // namespace evmhorn
