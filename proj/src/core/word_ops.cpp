// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/word_ops.hpp"

#include <array>
#include <cassert>

namespace evmhorn
{
namespace
{
struct OpEntry
{
    std::string_view name;
    size_t arity;
    bool core;
};

constexpr std::array<OpEntry, op_kind_count> op_table{{
    {"add", 2, true},
    {"mul", 2, true},
    {"sub", 2, true},
    {"div", 2, true},
    {"sdiv", 2, false},
    {"mod", 2, true},
    {"smod", 2, false},
    {"addmod", 3, false},
    {"mulmod", 3, false},
    {"exp", 2, true},
    {"signextend", 2, false},
    {"lt", 2, true},
    {"gt", 2, true},
    {"slt", 2, true},
    {"sgt", 2, true},
    {"eq", 2, true},
    {"iszero", 1, true},
    {"and", 2, true},
    {"or", 2, true},
    {"xor", 2, true},
    {"not", 1, true},
    {"byte", 2, false},
    {"shl", 2, true},
    {"shr", 2, true},
    {"sar", 2, false},
}};

Word from_signed(const BigInt& v)
{
    BigInt r = v % word_modulus();
    if (r < 0)
        r += word_modulus();
    return static_cast<Word>(r);
}

Word bool_word(bool b)
{
    return b ? Word{1} : Word{0};
}

Word exp_word(Word base, Word exponent)
{
    Word result = 1;
    while (exponent != 0)
    {
        if ((exponent & 1) != 0)
            result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}
}  // namespace

size_t op_arity(OpKind op) noexcept
{
    return op_table[static_cast<size_t>(op)].arity;
}

std::string_view op_name(OpKind op) noexcept
{
    return op_table[static_cast<size_t>(op)].name;
}

std::optional<OpKind> parse_op_name(std::string_view name) noexcept
{
    for (size_t i = 0; i < op_table.size(); ++i)
    {
        if (op_table[i].name == name)
            return static_cast<OpKind>(i);
    }
    return std::nullopt;
}

bool is_core_op(OpKind op) noexcept
{
    return op_table[static_cast<size_t>(op)].core;
}

Word apply_op(OpKind op, std::span<const Word> args)
{
    assert(args.size() == op_arity(op));
    const Word& a = args[0];
    const Word zero = 0;
    const Word& b = args.size() > 1 ? args[1] : zero;

    switch (op)
    {
    case OpKind::Add:
        return a + b;
    case OpKind::Mul:
        return a * b;
    case OpKind::Sub:
        return a - b;
    case OpKind::Div:
        return b == 0 ? Word{0} : Word{a / b};
    case OpKind::SDiv:
    {
        if (b == 0)
            return 0;
        const BigInt sa = to_signed(a);
        const BigInt sb = to_signed(b);
        // cpp_int division truncates toward zero, as the EVM requires.
        return from_signed(sa / sb);
    }
    case OpKind::Mod:
        return b == 0 ? Word{0} : Word{a % b};
    case OpKind::SMod:
    {
        if (b == 0)
            return 0;
        return from_signed(to_signed(a) % to_signed(b));
    }
    case OpKind::AddMod:
    {
        const Word& n = args[2];
        if (n == 0)
            return 0;
        return static_cast<Word>((BigInt{a} + BigInt{b}) % BigInt{n});
    }
    case OpKind::MulMod:
    {
        const Word& n = args[2];
        if (n == 0)
            return 0;
        return static_cast<Word>((BigInt{a} * BigInt{b}) % BigInt{n});
    }
    case OpKind::Exp:
        return exp_word(a, b);
    case OpKind::SignExtend:
    {
        if (a >= 31)
            return b;
        const unsigned bit = 8 * static_cast<unsigned>(a) + 7;
        const Word mask = (Word{1} << (bit + 1)) - 1;
        return boost::multiprecision::bit_test(b, bit) ? Word{b | ~mask} : Word{b & mask};
    }
    case OpKind::Lt:
        return bool_word(a < b);
    case OpKind::Gt:
        return bool_word(a > b);
    case OpKind::Slt:
        return bool_word(to_signed(a) < to_signed(b));
    case OpKind::Sgt:
        return bool_word(to_signed(a) > to_signed(b));
    case OpKind::Eq:
        return bool_word(a == b);
    case OpKind::IsZero:
        return bool_word(a == 0);
    case OpKind::And:
        return a & b;
    case OpKind::Or:
        return a | b;
    case OpKind::Xor:
        return a ^ b;
    case OpKind::Not:
        return ~a;
    case OpKind::Byte:
    {
        if (a >= 32)
            return 0;
        const unsigned shift = 8 * (31 - static_cast<unsigned>(a));
        return (b >> shift) & 0xff;
    }
    case OpKind::Shl:
        return a >= 256 ? Word{0} : Word{b << static_cast<unsigned>(a)};
    case OpKind::Shr:
        return a >= 256 ? Word{0} : Word{b >> static_cast<unsigned>(a)};
    case OpKind::Sar:
    {
        const bool negative = boost::multiprecision::bit_test(b, 255);
        if (a >= 256)
            return negative ? ~Word{0} : Word{0};
        const unsigned shift = static_cast<unsigned>(a);
        Word r = b >> shift;
        if (negative && shift > 0)
            r |= ~(~Word{0} >> shift);
        return r;
    }
    }
    return 0;
}

}  // namespace evmhorn
