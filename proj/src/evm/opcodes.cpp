// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/evm/opcodes.hpp"

#include <array>

namespace evmhorn::evm
{
namespace
{
using Table = std::array<OpcodeInfo, 256>;

constexpr std::string_view push_names[] = {"PUSH0", "PUSH1", "PUSH2", "PUSH3", "PUSH4", "PUSH5",
    "PUSH6", "PUSH7", "PUSH8", "PUSH9", "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14", "PUSH15",
    "PUSH16", "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22", "PUSH23", "PUSH24",
    "PUSH25", "PUSH26", "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31", "PUSH32"};
constexpr std::string_view dup_names[] = {"DUP1", "DUP2", "DUP3", "DUP4", "DUP5", "DUP6", "DUP7",
    "DUP8", "DUP9", "DUP10", "DUP11", "DUP12", "DUP13", "DUP14", "DUP15", "DUP16"};
constexpr std::string_view swap_names[] = {"SWAP1", "SWAP2", "SWAP3", "SWAP4", "SWAP5", "SWAP6",
    "SWAP7", "SWAP8", "SWAP9", "SWAP10", "SWAP11", "SWAP12", "SWAP13", "SWAP14", "SWAP15",
    "SWAP16"};
constexpr std::string_view log_names[] = {"LOG0", "LOG1", "LOG2", "LOG3", "LOG4"};

const OpcodeInfo undefined_info{"INVALID", 0, 0, 0, false, true};

Table build_table(OpcodeTable version)
{
    Table t;
    t.fill(undefined_info);
    auto def = [&](uint8_t op, std::string_view name, uint8_t pops, uint8_t pushes,
                   bool terminator = false) {
        t[op] = OpcodeInfo{name, pops, pushes, 0, true, terminator};
    };

    def(OP_STOP, "STOP", 0, 0, true);
    def(OP_ADD, "ADD", 2, 1);
    def(OP_MUL, "MUL", 2, 1);
    def(OP_SUB, "SUB", 2, 1);
    def(OP_DIV, "DIV", 2, 1);
    def(OP_SDIV, "SDIV", 2, 1);
    def(OP_MOD, "MOD", 2, 1);
    def(OP_SMOD, "SMOD", 2, 1);
    def(OP_ADDMOD, "ADDMOD", 3, 1);
    def(OP_MULMOD, "MULMOD", 3, 1);
    def(OP_EXP, "EXP", 2, 1);
    def(OP_SIGNEXTEND, "SIGNEXTEND", 2, 1);
    def(OP_LT, "LT", 2, 1);
    def(OP_GT, "GT", 2, 1);
    def(OP_SLT, "SLT", 2, 1);
    def(OP_SGT, "SGT", 2, 1);
    def(OP_EQ, "EQ", 2, 1);
    def(OP_ISZERO, "ISZERO", 1, 1);
    def(OP_AND, "AND", 2, 1);
    def(OP_OR, "OR", 2, 1);
    def(OP_XOR, "XOR", 2, 1);
    def(OP_NOT, "NOT", 1, 1);
    def(OP_BYTE, "BYTE", 2, 1);
    def(OP_SHL, "SHL", 2, 1);
    def(OP_SHR, "SHR", 2, 1);
    def(OP_SAR, "SAR", 2, 1);
    def(OP_SHA3, "SHA3", 2, 1);
    def(OP_ADDRESS, "ADDRESS", 0, 1);
    def(OP_BALANCE, "BALANCE", 1, 1);
    def(OP_ORIGIN, "ORIGIN", 0, 1);
    def(OP_CALLER, "CALLER", 0, 1);
    def(OP_CALLVALUE, "CALLVALUE", 0, 1);
    def(OP_CALLDATALOAD, "CALLDATALOAD", 1, 1);
    def(OP_CALLDATASIZE, "CALLDATASIZE", 0, 1);
    def(OP_CALLDATACOPY, "CALLDATACOPY", 3, 0);
    def(OP_CODESIZE, "CODESIZE", 0, 1);
    def(OP_CODECOPY, "CODECOPY", 3, 0);
    def(OP_GASPRICE, "GASPRICE", 0, 1);
    def(OP_EXTCODESIZE, "EXTCODESIZE", 1, 1);
    def(OP_EXTCODECOPY, "EXTCODECOPY", 4, 0);
    def(OP_RETURNDATASIZE, "RETURNDATASIZE", 0, 1);
    def(OP_RETURNDATACOPY, "RETURNDATACOPY", 3, 0);
    def(OP_EXTCODEHASH, "EXTCODEHASH", 1, 1);
    def(OP_BLOCKHASH, "BLOCKHASH", 1, 1);
    def(OP_COINBASE, "COINBASE", 0, 1);
    def(OP_TIMESTAMP, "TIMESTAMP", 0, 1);
    def(OP_NUMBER, "NUMBER", 0, 1);
    def(OP_DIFFICULTY, "DIFFICULTY", 0, 1);
    def(OP_GASLIMIT, "GASLIMIT", 0, 1);
    def(OP_POP, "POP", 1, 0);
    def(OP_MLOAD, "MLOAD", 1, 1);
    def(OP_MSTORE, "MSTORE", 2, 0);
    def(OP_MSTORE8, "MSTORE8", 2, 0);
    def(OP_SLOAD, "SLOAD", 1, 1);
    def(OP_SSTORE, "SSTORE", 2, 0);
    def(OP_JUMP, "JUMP", 1, 0, true);
    def(OP_JUMPI, "JUMPI", 2, 0, true);
    def(OP_PC, "PC", 0, 1);
    def(OP_MSIZE, "MSIZE", 0, 1);
    def(OP_GAS, "GAS", 0, 1);
    def(OP_JUMPDEST, "JUMPDEST", 0, 0);
    for (uint8_t n = 1; n <= 32; ++n)
        t[OP_PUSH1 + n - 1] = OpcodeInfo{push_names[n], 0, 1, n, true, false};
    for (uint8_t n = 1; n <= 16; ++n)
    {
        def(static_cast<uint8_t>(OP_DUP1 + n - 1), dup_names[n - 1], n, n + 1);
        def(static_cast<uint8_t>(OP_SWAP1 + n - 1), swap_names[n - 1], n + 1, n + 1);
    }
    for (uint8_t n = 0; n <= 4; ++n)
        def(static_cast<uint8_t>(OP_LOG0 + n), log_names[n], n + 2, 0);
    def(OP_CREATE, "CREATE", 3, 1);
    def(OP_CALL, "CALL", 7, 1);
    def(OP_CALLCODE, "CALLCODE", 7, 1);
    def(OP_RETURN, "RETURN", 2, 0, true);
    def(OP_DELEGATECALL, "DELEGATECALL", 6, 1);
    def(OP_CREATE2, "CREATE2", 4, 1);
    def(OP_STATICCALL, "STATICCALL", 6, 1);
    def(OP_REVERT, "REVERT", 2, 0, true);
    t[OP_INVALID] = OpcodeInfo{"INVALID", 0, 0, 0, true, true};
    def(OP_SELFDESTRUCT, "SELFDESTRUCT", 1, 0, true);

    if (version == OpcodeTable::Istanbul || version == OpcodeTable::Shanghai)
    {
        def(OP_CHAINID, "CHAINID", 0, 1);
        def(OP_SELFBALANCE, "SELFBALANCE", 0, 1);
    }
    if (version == OpcodeTable::Shanghai)
    {
        def(OP_BASEFEE, "BASEFEE", 0, 1);
        t[OP_PUSH0] = OpcodeInfo{push_names[0], 0, 1, 0, true, false};
    }
    return t;
}

const Table& table_for(OpcodeTable version)
{
    static const Table constantinople = build_table(OpcodeTable::Constantinople);
    static const Table istanbul = build_table(OpcodeTable::Istanbul);
    static const Table shanghai = build_table(OpcodeTable::Shanghai);
    switch (version)
    {
    case OpcodeTable::Istanbul:
        return istanbul;
    case OpcodeTable::Shanghai:
        return shanghai;
    default:
        return constantinople;
    }
}
}  // namespace

std::optional<OpcodeTable> parse_opcode_table(std::string_view name) noexcept
{
    if (name == "constantinople")
        return OpcodeTable::Constantinople;
    if (name == "istanbul")
        return OpcodeTable::Istanbul;
    if (name == "shanghai")
        return OpcodeTable::Shanghai;
    return std::nullopt;
}

std::string_view to_string(OpcodeTable table) noexcept
{
    switch (table)
    {
    case OpcodeTable::Istanbul:
        return "istanbul";
    case OpcodeTable::Shanghai:
        return "shanghai";
    default:
        return "constantinople";
    }
}

const OpcodeInfo& opcode_info(uint8_t byte, OpcodeTable table) noexcept
{
    return table_for(table)[byte];
}

std::optional<uint8_t> opcode_by_name(std::string_view name, OpcodeTable table) noexcept
{
    const auto& t = table_for(table);
    for (size_t i = 0; i < t.size(); ++i)
    {
        if (t[i].defined && t[i].name == name)
            return static_cast<uint8_t>(i);
    }
    return std::nullopt;
}

std::optional<OpKind> arithmetic_op(uint8_t op) noexcept
{
    switch (op)
    {
    case OP_ADD:
        return OpKind::Add;
    case OP_MUL:
        return OpKind::Mul;
    case OP_SUB:
        return OpKind::Sub;
    case OP_DIV:
        return OpKind::Div;
    case OP_SDIV:
        return OpKind::SDiv;
    case OP_MOD:
        return OpKind::Mod;
    case OP_SMOD:
        return OpKind::SMod;
    case OP_ADDMOD:
        return OpKind::AddMod;
    case OP_MULMOD:
        return OpKind::MulMod;
    case OP_EXP:
        return OpKind::Exp;
    case OP_SIGNEXTEND:
        return OpKind::SignExtend;
    case OP_LT:
        return OpKind::Lt;
    case OP_GT:
        return OpKind::Gt;
    case OP_SLT:
        return OpKind::Slt;
    case OP_SGT:
        return OpKind::Sgt;
    case OP_EQ:
        return OpKind::Eq;
    case OP_ISZERO:
        return OpKind::IsZero;
    case OP_AND:
        return OpKind::And;
    case OP_OR:
        return OpKind::Or;
    case OP_XOR:
        return OpKind::Xor;
    case OP_NOT:
        return OpKind::Not;
    case OP_BYTE:
        return OpKind::Byte;
    case OP_SHL:
        return OpKind::Shl;
    case OP_SHR:
        return OpKind::Shr;
    case OP_SAR:
        return OpKind::Sar;
    default:
        return std::nullopt;
    }
}

}  // namespace evmhorn::evm
