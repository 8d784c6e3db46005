// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace evmhorn
{
/// A 256-bit EVM word. Arithmetic wraps modulo 2^256.
using Word = boost::multiprecision::uint256_t;

/// Unbounded integer, used where linear combinations of words must not wrap.
using BigInt = boost::multiprecision::cpp_int;

using Bytes = std::vector<uint8_t>;

/// 2^256 as an unbounded integer.
const BigInt& word_modulus();

/// Big-endian decode of up to 32 bytes.
Word word_from_bytes(std::span<const uint8_t> bytes);

std::array<uint8_t, 32> word_to_bytes(const Word& w);

/// Lower-case hex with "0x" prefix and no leading zeros ("0x0" for zero).
std::string to_hex(const Word& w);

std::string bytes_to_hex(std::span<const uint8_t> bytes);

/// Accepts decimal or 0x-prefixed hex. Throws std::invalid_argument on
/// malformed text or values outside [0, 2^256).
Word parse_word(std::string_view text);

/// Parses "0x..." (or bare) hex into bytes; throws std::invalid_argument.
Bytes parse_hex_bytes(std::string_view text);

/// Two's complement view of a word.
BigInt to_signed(const Word& w);

struct WordHash
{
    size_t operator()(const Word& w) const noexcept;
};

/// Either a concrete word or Top ("any value").
class AbstractWord
{
public:
    AbstractWord() = default;

    static AbstractWord top() { return AbstractWord{}; }
    static AbstractWord constant(Word value) { return AbstractWord{std::move(value)}; }

    bool is_top() const noexcept { return top_; }
    bool is_const() const noexcept { return !top_; }
    const Word& value() const noexcept { return value_; }

    /// "top" or hex constant.
    std::string str() const;

    friend bool operator==(const AbstractWord& a, const AbstractWord& b) noexcept
    {
        return a.top_ == b.top_ && (a.top_ || a.value_ == b.value_);
    }

private:
    explicit AbstractWord(Word value) : top_{false}, value_{std::move(value)} {}

    bool top_ = true;
    Word value_ = 0;
};

inline AbstractWord join(const AbstractWord& a, const AbstractWord& b)
{
    return a == b ? a : AbstractWord::top();
}

/// Concretization membership: concrete ∈ γ(abstract).
inline bool covers(const AbstractWord& abstract, const Word& concrete)
{
    return abstract.is_top() || abstract.value() == concrete;
}

/// Pointwise ordering: every position of `general` is Top or equal to `specific`.
bool subsumes(std::span<const AbstractWord> general, std::span<const AbstractWord> specific);

struct AbstractTupleHash
{
    size_t operator()(const std::vector<AbstractWord>& tuple) const noexcept;
};

}  // namespace evmhorn
