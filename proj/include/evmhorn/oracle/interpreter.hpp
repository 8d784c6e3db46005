// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evmhorn/evm/bytecode.hpp"

namespace evmhorn::oracle
{
/// Outcome of one scripted internal transaction.
struct CallResult
{
    bool success = false;
    Bytes return_data;
};

/// Fixed answers for every environment opcode of one execution.
struct EnvScript
{
    Word address = 0x1000;
    Word caller = 0x2000;
    Word origin = 0x2000;
    Word callvalue = 0;
    Bytes calldata;
    Word gasprice = 1;
    Word coinbase = 0;
    Word timestamp = 0;
    Word number = 0;
    Word difficulty = 0;
    Word gaslimit = 10'000'000;
    Word chainid = 1;
    /// Returned by BALANCE, SELFBALANCE and EXTCODESIZE for any account.
    Word balance = 0;
    Word extcodesize = 0;
    /// Value pushed by GAS.
    Word gas = 1'000'000;
    std::map<Word, Word> storage;
    /// Consumed in order by call-class instructions; once exhausted every
    /// further call fails.
    std::vector<CallResult> calls;
    size_t step_limit = 10'000;
    /// Memory growth beyond this many bytes halts exceptionally.
    size_t memory_limit = 1 << 20;
};

enum class HaltReason : uint8_t
{
    Stop,
    Return,
    Revert,
    SelfDestruct,
    Invalid,
    StackUnderflow,
    StackOverflow,
    BadJump,
    StepLimit,
    MemoryLimit,
};

std::string_view to_string(HaltReason r) noexcept;
std::optional<HaltReason> parse_halt_reason(std::string_view name) noexcept;

/// True for halts that revert every effect of the execution.
bool is_exceptional(HaltReason r) noexcept;

/// Machine state before the instruction at `pc` executes.
struct ConcreteState
{
    uint64_t pc = 0;
    /// Top of stack first.
    std::vector<Word> stack;
    Bytes memory;
    std::map<Word, Word> storage;
    /// A call-class instruction has already executed.
    bool called = false;

    bool operator==(const ConcreteState&) const = default;
};

struct Trace
{
    std::vector<ConcreteState> states;
    HaltReason halt = HaltReason::Stop;
    /// Storage after the execution; equals the initial storage when it reverted.
    std::map<Word, Word> final_storage;
    Bytes return_data;
};

class UnsupportedOpcode : public std::runtime_error
{
public:
    UnsupportedOpcode(uint64_t pc, uint8_t opcode);

    uint64_t pc() const noexcept { return pc_; }
    uint8_t opcode() const noexcept { return opcode_; }

private:
    uint64_t pc_;
    uint8_t opcode_;
};

/// Runs the stream on the script. Callees are never executed: a call consumes
/// the next scripted result, copies its return data and leaves storage alone.
/// Throws UnsupportedOpcode outside the supported subset.
Trace exec_concrete(const evm::InstructionStream& stream, const EnvScript& env);

/// One line per state: "pc=N stack=[...] called=B".
std::string dump_trace(const Trace& trace);

}  // namespace evmhorn::oracle
