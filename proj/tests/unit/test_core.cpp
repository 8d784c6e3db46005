// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "evmhorn/diagnostics.hpp"
#include "evmhorn/keccak.hpp"
#include "evmhorn/word.hpp"
#include "evmhorn/word_ops.hpp"

using namespace evmhorn;

TEST(Word, HexFormatting)
{
    EXPECT_EQ(to_hex(Word{0}), "0x0");
    EXPECT_EQ(to_hex(Word{255}), "0xff");
    EXPECT_EQ(parse_word("0x10"), Word{16});
    EXPECT_EQ(parse_word("42"), Word{42});
    EXPECT_THROW(parse_word("0xzz"), std::invalid_argument);
    EXPECT_THROW(parse_word(""), std::invalid_argument);
    // 2^256 does not fit.
    EXPECT_THROW(parse_word("0x1" + std::string(64, '0')), std::invalid_argument);
}

TEST(Word, BytesRoundTrip)
{
    const Word w = parse_word("0x0102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f20");
    const auto b = word_to_bytes(w);
    EXPECT_EQ(b[0], 1);
    EXPECT_EQ(b[31], 0x20);
    EXPECT_EQ(word_from_bytes(b), w);
    const uint8_t two[] = {0x12, 0x34};
    EXPECT_EQ(word_from_bytes(two), Word{0x1234});
}

TEST(Word, AbstractJoinAndCover)
{
    const auto a = AbstractWord::constant(5);
    const auto t = AbstractWord::top();
    EXPECT_EQ(join(a, a), a);
    EXPECT_EQ(join(a, AbstractWord::constant(6)), t);
    EXPECT_EQ(join(a, t), t);
    EXPECT_TRUE(covers(t, 123));
    EXPECT_TRUE(covers(a, 5));
    EXPECT_FALSE(covers(a, 6));
    const std::vector<AbstractWord> g{t, a};
    const std::vector<AbstractWord> s{AbstractWord::constant(1), a};
    EXPECT_TRUE(subsumes(g, s));
    EXPECT_FALSE(subsumes(s, g));
}

TEST(Keccak, KnownDigests)
{
    // Reference digests from an independent Keccak-256 implementation.
    EXPECT_EQ(bytes_to_hex(keccak256({})),
        "0xc5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    const std::string abc = "abc";
    EXPECT_EQ(bytes_to_hex(keccak256({reinterpret_cast<const uint8_t*>(abc.data()), abc.size()})),
        "0x4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
    Bytes seq(200);
    for (size_t i = 0; i < seq.size(); ++i)
        seq[i] = static_cast<uint8_t>(i);
    EXPECT_EQ(bytes_to_hex(keccak256(seq)),
        "0xbfb0aa97863e797943cf7c33bb7e880bb4543f3d2703c0923c6901c2af57b890");
}

TEST(WordOps, NamesRoundTrip)
{
    for (size_t i = 0; i < op_kind_count; ++i)
    {
        const auto op = static_cast<OpKind>(i);
        EXPECT_EQ(parse_op_name(op_name(op)), op);
    }
    EXPECT_FALSE(parse_op_name("frobnicate"));
}

TEST(WordOps, OracleVectors)
{
    std::ifstream in{EVMHORN_TEST_DATA_DIR "/op_vectors.txt"};
    ASSERT_TRUE(in) << "missing op_vectors.txt";
    std::string line;
    size_t checked = 0;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream fields{line};
        std::string name;
        fields >> name;
        const auto op = parse_op_name(name);
        ASSERT_TRUE(op) << name;
        std::vector<Word> args(op_arity(*op));
        std::string tok;
        for (auto& a : args)
        {
            fields >> tok;
            a = parse_word(tok);
        }
        fields >> tok;
        EXPECT_EQ(apply_op(*op, args), parse_word(tok)) << line;
        ++checked;
    }
    EXPECT_GE(checked, 500u);
}

TEST(WordOps, ModularAdd)
{
    const Word max = parse_word("0x" + std::string(64, 'f'));
    const std::vector<Word> args{max, 1};
    EXPECT_EQ(apply_op(OpKind::Add, args), Word{0});
}

TEST(Diagnostics, Format)
{
    const Diagnostic d{DiagnosticKind::UnreconstructableControlFlow, 1, "jump target unknown"};
    EXPECT_EQ(format(d), "UnreconstructableControlFlow(1): jump target unknown");
    EXPECT_TRUE(is_error(DiagnosticKind::HeightOverflow));
    EXPECT_FALSE(is_error(DiagnosticKind::InvalidJumpTarget));
}
