// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/keccak.hpp"

#include <bit>
#include <cstring>

namespace evmhorn
{
namespace
{
constexpr std::array<uint64_t, 24> round_constants{
    0x0000000000000001ull, 0x0000000000008082ull, 0x800000000000808aull, 0x8000000080008000ull,
    0x000000000000808bull, 0x0000000080000001ull, 0x8000000080008081ull, 0x8000000000008009ull,
    0x000000000000008aull, 0x0000000000000088ull, 0x0000000080008009ull, 0x000000008000000aull,
    0x000000008000808bull, 0x800000000000008bull, 0x8000000000008089ull, 0x8000000000008003ull,
    0x8000000000008002ull, 0x8000000000000080ull, 0x000000000000800aull, 0x800000008000000aull,
    0x8000000080008081ull, 0x8000000000008080ull, 0x0000000080000001ull, 0x8000000080008008ull,
};

constexpr std::array<int, 25> rotations{
    0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43, 25, 39, 41, 45, 15, 21, 8, 18, 2, 61, 56, 14,
};

void keccak_f(std::array<uint64_t, 25>& a)
{
    for (const auto rc : round_constants)
    {
        std::array<uint64_t, 5> c{};
        for (int x = 0; x < 5; ++x)
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x)
        {
            const uint64_t d = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5)
                a[y + x] ^= d;
        }

        std::array<uint64_t, 25> b{};
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = std::rotl(a[x + 5 * y], rotations[x + 5 * y]);

        for (int y = 0; y < 25; y += 5)
            for (int x = 0; x < 5; ++x)
                a[y + x] = b[y + x] ^ (~b[y + (x + 1) % 5] & b[y + (x + 2) % 5]);

        a[0] ^= rc;
    }
}

uint64_t load_le(const uint8_t* p)
{
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | p[i];
    return v;
}
}  // namespace

std::array<uint8_t, 32> keccak256(std::span<const uint8_t> data)
{
    constexpr size_t rate = 136;
    std::array<uint64_t, 25> state{};

    auto absorb = [&](const uint8_t* block) {
        for (size_t i = 0; i < rate / 8; ++i)
            state[i] ^= load_le(block + 8 * i);
        keccak_f(state);
    };

    size_t offset = 0;
    while (data.size() - offset >= rate)
    {
        absorb(data.data() + offset);
        offset += rate;
    }

    std::array<uint8_t, rate> last{};
    const size_t rest = data.size() - offset;
    if (rest > 0)
        std::memcpy(last.data(), data.data() + offset, rest);
    last[rest] ^= 0x01;
    last[rate - 1] ^= 0x80;
    absorb(last.data());

    std::array<uint8_t, 32> out{};
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 8; ++j)
            out[8 * i + j] = static_cast<uint8_t>(state[i] >> (8 * j));
    return out;
}

}  // namespace evmhorn
