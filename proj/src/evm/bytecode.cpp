// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/evm/bytecode.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

namespace evmhorn::evm
{
namespace
{
int hex_value(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

std::string hex_byte(uint8_t b)
{
    static constexpr char digits[] = "0123456789abcdef";
    return {digits[b >> 4], digits[b & 0xf]};
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}
}  // namespace

InstructionStream::InstructionStream(
    Bytes code, std::vector<Instruction> instructions, OpcodeTable table)
  : code_{std::move(code)}, instructions_{std::move(instructions)}, table_{table}
{
    index_.assign(code_.size(), -1);
    for (size_t i = 0; i < instructions_.size(); ++i)
    {
        const auto& ins = instructions_[i];
        if (ins.pc < index_.size())
            index_[ins.pc] = static_cast<int64_t>(i);
        if (ins.opcode == OP_JUMPDEST && info(ins).defined)
            jumpdests_.insert(ins.pc);
    }
}

const Instruction* InstructionStream::at(uint64_t pc) const noexcept
{
    const auto i = index_of(pc);
    return i < 0 ? nullptr : &instructions_[static_cast<size_t>(i)];
}

int64_t InstructionStream::index_of(uint64_t pc) const noexcept
{
    return pc < index_.size() ? index_[pc] : -1;
}

Bytes InstructionStream::encode() const
{
    Bytes out;
    out.reserve(code_.size());
    for (const auto& ins : instructions_)
    {
        out.push_back(ins.opcode);
        out.insert(out.end(), ins.immediate.begin(), ins.immediate.begin() + ins.present);
    }
    return out;
}

InstructionStream decode_bytecode(std::span<const uint8_t> code, OpcodeTable table)
{
    std::vector<Instruction> instructions;
    for (uint64_t pc = 0; pc < code.size();)
    {
        Instruction ins;
        ins.pc = pc;
        ins.opcode = code[pc];
        const auto width = opcode_info(ins.opcode, table).immediate;
        if (width > 0)
        {
            ins.immediate.assign(width, 0);
            const auto available = std::min<uint64_t>(width, code.size() - pc - 1);
            std::copy_n(code.begin() + static_cast<std::ptrdiff_t>(pc + 1), available,
                ins.immediate.begin());
            ins.present = static_cast<uint8_t>(available);
        }
        pc += ins.encoded_size();
        instructions.push_back(std::move(ins));
    }
    return InstructionStream{Bytes(code.begin(), code.end()), std::move(instructions), table};
}

Bytes hex_text_to_bytes(std::string_view text)
{
    Bytes out;
    int pending = -1;
    size_t pending_offset = 0;
    bool seen_digit = false;
    for (size_t i = 0; i < text.size(); ++i)
    {
        const char c = text[i];
        if (c == '#')
        {
            while (i < text.size() && text[i] != '\n')
                ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c)))
            continue;
        if (!seen_digit && pending < 0 && out.empty() && c == '0' && i + 1 < text.size() &&
            (text[i + 1] == 'x' || text[i + 1] == 'X'))
        {
            ++i;
            seen_digit = true;
            continue;
        }
        seen_digit = true;
        const int v = hex_value(c);
        if (v < 0)
            throw DecodeError(i, std::string{"non-hex character '"} + c + "'");
        if (pending < 0)
        {
            pending = v;
            pending_offset = i;
        }
        else
        {
            out.push_back(static_cast<uint8_t>(pending << 4 | v));
            pending = -1;
        }
    }
    if (pending >= 0)
        throw DecodeError(pending_offset, "odd number of hex digits");
    return out;
}

InstructionStream decode_hex(std::string_view text, OpcodeTable table)
{
    return decode_bytecode(hex_text_to_bytes(text), table);
}

Bytes load_code_file(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    const std::string content{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
    const bool textual = std::all_of(content.begin(), content.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return u == '\n' || u == '\r' || u == '\t' || (u >= 0x20 && u < 0x7f);
    });
    if (textual)
        return hex_text_to_bytes(content);
    return Bytes(content.begin(), content.end());
}

std::set<uint64_t> valid_jumpdests(const InstructionStream& stream)
{
    return stream.jumpdests();
}

bool is_block_terminator(const InstructionStream& stream, const Instruction& ins)
{
    return stream.info(ins).terminator;
}

BlockSkeleton split_basic_blocks(const InstructionStream& stream)
{
    BlockSkeleton skeleton;
    const auto& instructions = stream.instructions();
    bool open = false;
    for (size_t i = 0; i < instructions.size(); ++i)
    {
        const auto& ins = instructions[i];
        if (open && stream.is_jumpdest(ins.pc))
        {
            // The previous block ran into a jump destination without a terminator.
            skeleton.fallthrough.emplace_back(skeleton.blocks.size() - 1, skeleton.blocks.size());
            open = false;
        }
        if (!open)
        {
            skeleton.blocks.push_back(Block{ins.pc, i, i});
            open = true;
        }
        skeleton.blocks.back().last = i;
        if (is_block_terminator(stream, ins))
        {
            if (ins.opcode == OP_JUMPI && i + 1 < instructions.size())
                skeleton.fallthrough.emplace_back(skeleton.blocks.size() - 1, skeleton.blocks.size());
            open = false;
        }
    }
    return skeleton;
}

int64_t BlockSkeleton::block_of(const InstructionStream& stream, uint64_t pc) const
{
    const auto idx = stream.index_of(pc);
    if (idx < 0)
        return -1;
    const auto it = std::upper_bound(blocks.begin(), blocks.end(), static_cast<size_t>(idx),
        [](size_t i, const Block& b) { return i < b.first; });
    if (it == blocks.begin())
        return -1;
    return std::distance(blocks.begin(), it) - 1;
}

std::string disassemble_text(const InstructionStream& stream)
{
    std::string out;
    for (const auto& ins : stream.instructions())
    {
        const auto& info = stream.info(ins);
        out += std::to_string(ins.pc);
        out += ": ";
        if (info.name == "INVALID")
        {
            out += "INVALID(0x" + hex_byte(ins.opcode) + ")";
        }
        else
        {
            out += info.name;
            if (info.immediate > 0)
            {
                out += " 0x";
                for (size_t i = 0; i < ins.present; ++i)
                    out += hex_byte(ins.immediate[i]);
            }
        }
        out += '\n';
    }
    return out;
}

InstructionStream parse_listing(std::string_view text, OpcodeTable table)
{
    Bytes code;
    size_t line_no = 0;
    bool truncated_seen = false;
    std::istringstream lines{std::string{text}};
    std::string raw;
    while (std::getline(lines, raw))
    {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty())
            continue;
        if (truncated_seen)
            throw DecodeError(line_no, "instruction after truncated push");
        const auto colon = line.find(':');
        if (colon == std::string_view::npos)
            throw DecodeError(line_no, "missing ':'");
        uint64_t pc = 0;
        try
        {
            pc = std::stoull(std::string{trim(line.substr(0, colon))});
        }
        catch (const std::exception&)
        {
            throw DecodeError(line_no, "bad program counter");
        }
        if (pc != code.size())
            throw DecodeError(line_no, "program counter " + std::to_string(pc) + " does not match offset " +
                                           std::to_string(code.size()));

        auto rest = trim(line.substr(colon + 1));
        const auto space = rest.find(' ');
        const auto mnemonic = rest.substr(0, space);
        const auto operand = space == std::string_view::npos ? std::string_view{} : trim(rest.substr(space));

        if (mnemonic.starts_with("INVALID(") && mnemonic.ends_with(")"))
        {
            const auto hex = mnemonic.substr(8, mnemonic.size() - 9);
            Bytes b;
            try
            {
                b = parse_hex_bytes(hex);
            }
            catch (const std::exception&)
            {
                throw DecodeError(line_no, "bad INVALID byte");
            }
            if (b.size() != 1 || opcode_info(b[0], table).name != "INVALID")
                throw DecodeError(line_no, "byte is not INVALID-class in this table");
            code.push_back(b[0]);
            continue;
        }

        const auto op = opcode_by_name(mnemonic, table);
        if (!op)
            throw DecodeError(line_no, "unknown mnemonic '" + std::string{mnemonic} + "'");
        const auto width = opcode_info(*op, table).immediate;
        code.push_back(*op);
        if (width == 0)
        {
            if (!operand.empty())
                throw DecodeError(line_no, "unexpected operand");
            continue;
        }
        Bytes imm;
        try
        {
            imm = parse_hex_bytes(operand);
        }
        catch (const std::exception&)
        {
            throw DecodeError(line_no, "bad push immediate");
        }
        if (imm.size() > width)
            throw DecodeError(line_no, "push immediate has wrong width");
        truncated_seen = imm.size() < width;
        code.insert(code.end(), imm.begin(), imm.end());
    }
    return decode_bytecode(code, table);
}

}  // namespace evmhorn::evm
