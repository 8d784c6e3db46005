// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/word.hpp"

#include <stdexcept>

namespace evmhorn
{
namespace
{
int hex_digit(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

bool has_hex_prefix(std::string_view s) noexcept
{
    return s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
}
}  // namespace

const BigInt& word_modulus()
{
    static const BigInt m = BigInt{1} << 256;
    return m;
}

Word word_from_bytes(std::span<const uint8_t> bytes)
{
    if (bytes.size() > 32)
        throw std::invalid_argument("word_from_bytes: more than 32 bytes");
    Word w = 0;
    for (const auto b : bytes)
        w = (w << 8) | b;
    return w;
}

std::array<uint8_t, 32> word_to_bytes(const Word& w)
{
    std::array<uint8_t, 32> out{};
    Word v = w;
    for (size_t i = 0; i < 32; ++i)
    {
        out[31 - i] = static_cast<uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

std::string to_hex(const Word& w)
{
    if (w == 0)
        return "0x0";
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    Word v = w;
    while (v != 0)
    {
        out.push_back(digits[static_cast<unsigned>(v & 0xf)]);
        v >>= 4;
    }
    out += "x0";
    return {out.rbegin(), out.rend()};
}

std::string bytes_to_hex(std::span<const uint8_t> bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = "0x";
    out.reserve(2 + 2 * bytes.size());
    for (const auto b : bytes)
    {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Word parse_word(std::string_view text)
{
    if (text.empty())
        throw std::invalid_argument("empty word literal");
    BigInt value = 0;
    if (has_hex_prefix(text))
    {
        const auto digits = text.substr(2);
        if (digits.empty())
            throw std::invalid_argument("empty hex literal");
        for (const char c : digits)
        {
            const int d = hex_digit(c);
            if (d < 0)
                throw std::invalid_argument("bad hex digit in '" + std::string{text} + "'");
            value = (value << 4) | d;
            if (value >= word_modulus())
                throw std::invalid_argument("literal exceeds 256 bits: " + std::string{text});
        }
    }
    else
    {
        for (const char c : text)
        {
            if (c < '0' || c > '9')
                throw std::invalid_argument("bad decimal digit in '" + std::string{text} + "'");
            value = value * 10 + (c - '0');
            if (value >= word_modulus())
                throw std::invalid_argument("literal exceeds 256 bits: " + std::string{text});
        }
    }
    return static_cast<Word>(value);
}

Bytes parse_hex_bytes(std::string_view text)
{
    if (has_hex_prefix(text))
        text.remove_prefix(2);
    if (text.size() % 2 != 0)
        throw std::invalid_argument("odd number of hex digits");
    Bytes out;
    out.reserve(text.size() / 2);
    for (size_t i = 0; i < text.size(); i += 2)
    {
        const int hi = hex_digit(text[i]);
        const int lo = hex_digit(text[i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("bad hex digit at offset " + std::to_string(i));
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

BigInt to_signed(const Word& w)
{
    BigInt v = static_cast<BigInt>(w);
    if (boost::multiprecision::bit_test(w, 255))
        v -= word_modulus();
    return v;
}

size_t WordHash::operator()(const Word& w) const noexcept
{
    size_t h = 0xcbf29ce484222325ull;
    const auto& backend = w.backend();
    for (unsigned i = 0; i < backend.size(); ++i)
    {
        h ^= static_cast<size_t>(backend.limbs()[i]);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string AbstractWord::str() const
{
    return top_ ? "top" : to_hex(value_);
}

bool subsumes(std::span<const AbstractWord> general, std::span<const AbstractWord> specific)
{
    if (general.size() != specific.size())
        return false;
    for (size_t i = 0; i < general.size(); ++i)
    {
        if (general[i].is_top())
            continue;
        if (specific[i].is_top() || specific[i].value() != general[i].value())
            return false;
    }
    return true;
}

size_t AbstractTupleHash::operator()(const std::vector<AbstractWord>& tuple) const noexcept
{
    size_t h = tuple.size();
    for (const auto& w : tuple)
    {
        const size_t e = w.is_top() ? 0x9e3779b97f4a7c15ull : WordHash{}(w.value());
        h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

}  // namespace evmhorn
