// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evmhorn/evm/opcodes.hpp"
#include "evmhorn/word.hpp"

namespace evmhorn::evm
{
struct Instruction
{
    uint64_t pc = 0;
    uint8_t opcode = OP_STOP;
    /// Push immediate, zero-padded to the declared width when truncated at code end.
    Bytes immediate;
    /// Number of immediate bytes actually present in the code.
    uint8_t present = 0;

    /// Bytes occupied in the code (opcode plus present immediate bytes).
    uint64_t encoded_size() const noexcept { return 1 + present; }
    uint64_t next_pc() const noexcept { return pc + 1 + immediate.size(); }
    bool truncated() const noexcept { return present < immediate.size(); }
    Word immediate_word() const { return word_from_bytes(immediate); }

    bool operator==(const Instruction&) const = default;
};

class InstructionStream
{
public:
    InstructionStream() = default;
    InstructionStream(Bytes code, std::vector<Instruction> instructions, OpcodeTable table);

    const Bytes& code() const noexcept { return code_; }
    const std::vector<Instruction>& instructions() const noexcept { return instructions_; }
    const std::set<uint64_t>& jumpdests() const noexcept { return jumpdests_; }
    OpcodeTable table() const noexcept { return table_; }

    const OpcodeInfo& info(const Instruction& ins) const noexcept
    {
        return opcode_info(ins.opcode, table_);
    }

    /// Instruction starting exactly at `pc`, or nullptr (push data or past the end).
    const Instruction* at(uint64_t pc) const noexcept;

    /// Index into instructions() of the instruction starting at `pc`, or -1.
    int64_t index_of(uint64_t pc) const noexcept;

    bool is_jumpdest(uint64_t pc) const noexcept { return jumpdests_.contains(pc); }

    /// Opcode bytes plus present immediates; equals code() for decoded streams.
    Bytes encode() const;

    bool operator==(const InstructionStream& other) const
    {
        return code_ == other.code_ && instructions_ == other.instructions_ && table_ == other.table_;
    }

private:
    Bytes code_;
    std::vector<Instruction> instructions_;
    std::vector<int64_t> index_;
    std::set<uint64_t> jumpdests_;
    OpcodeTable table_ = OpcodeTable::Constantinople;
};

class DecodeError : public std::runtime_error
{
public:
    DecodeError(size_t offset, const std::string& what)
      : std::runtime_error{"decode error at offset " + std::to_string(offset) + ": " + what},
        offset_{offset}
    {}

    size_t offset() const noexcept { return offset_; }

private:
    size_t offset_;
};

/// Decodes raw code bytes. Never fails: unknown bytes become INVALID-class
/// instructions and truncated push immediates are zero-padded.
InstructionStream decode_bytecode(std::span<const uint8_t> code,
    OpcodeTable table = OpcodeTable::Constantinople);

/// Decodes hex text: optional "0x" prefix, whitespace ignored, and "#" starts a
/// comment that runs to the end of the line. Throws DecodeError naming the
/// offending character offset.
InstructionStream decode_hex(std::string_view text,
    OpcodeTable table = OpcodeTable::Constantinople);

/// Hex text to bytes with the same rules as decode_hex.
Bytes hex_text_to_bytes(std::string_view text);

/// Reads a file that holds either hex text or raw binary code.
Bytes load_code_file(const std::filesystem::path& path);

/// JUMPDEST bytes that are not inside push data.
std::set<uint64_t> valid_jumpdests(const InstructionStream& stream);

struct Block
{
    uint64_t entry = 0;
    /// Inclusive range into InstructionStream::instructions().
    size_t first = 0;
    size_t last = 0;

    bool operator==(const Block&) const = default;
};

struct BlockSkeleton
{
    std::vector<Block> blocks;
    /// (from, to) block indices.
    std::vector<std::pair<size_t, size_t>> fallthrough;

    /// Index of the block containing the instruction at `pc`, or -1.
    int64_t block_of(const InstructionStream& stream, uint64_t pc) const;
};

bool is_block_terminator(const InstructionStream& stream, const Instruction& ins);

BlockSkeleton split_basic_blocks(const InstructionStream& stream);

/// One line per instruction: "pc: MNEMONIC [0ximmediate]". Truncated push
/// immediates list only the bytes present in the code; undefined bytes print
/// as "INVALID(0xNN)".
std::string disassemble_text(const InstructionStream& stream);

/// Inverse of disassemble_text. Throws DecodeError (offset = line number).
InstructionStream parse_listing(std::string_view text,
    OpcodeTable table = OpcodeTable::Constantinople);

}  // namespace evmhorn::evm
