// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "evmhorn/word.hpp"

namespace evmhorn
{
/// Value-producing EVM operations that the analyses evaluate on constants.
/// Operand 0 is the stack top, so Sub computes s0 - s1 and Shl shifts s1 by s0.
enum class OpKind : uint8_t
{
    Add,
    Mul,
    Sub,
    Div,
    SDiv,
    Mod,
    SMod,
    AddMod,
    MulMod,
    Exp,
    SignExtend,
    Lt,
    Gt,
    Slt,
    Sgt,
    Eq,
    IsZero,
    And,
    Or,
    Xor,
    Not,
    Byte,
    Shl,
    Shr,
    Sar,
};

inline constexpr size_t op_kind_count = static_cast<size_t>(OpKind::Sar) + 1;

size_t op_arity(OpKind op) noexcept;

/// Lower-case name used by the textual IR ("add", "slt", ...).
std::string_view op_name(OpKind op) noexcept;

std::optional<OpKind> parse_op_name(std::string_view name) noexcept;

/// Ops whose result is computed pointwise by the CFG preanalysis; all other
/// value producers yield Top there.
bool is_core_op(OpKind op) noexcept;

/// EVM semantics on concrete operands. `args.size()` must equal op_arity(op).
Word apply_op(OpKind op, std::span<const Word> args);

}  // namespace evmhorn
