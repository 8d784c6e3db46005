// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/oracle/interpreter.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "evmhorn/keccak.hpp"

namespace evmhorn::oracle
{
using namespace evm;

namespace
{
constexpr std::array<std::string_view, 10> halt_names{"stop", "return", "revert", "selfdestruct", "invalid",
    "stack-underflow", "stack-overflow", "bad-jump", "step-limit", "memory-limit"};

// The oracle keeps its own arithmetic on unbounded integers so that it shares
// no code with the evaluator used by the analyses.
const BigInt& modulus()
{
    static const BigInt m = BigInt{1} << 256;
    return m;
}

Word narrow(const BigInt& v)
{
    if (v < 0 || v >= modulus())
        throw std::logic_error("oracle produced a value outside the word range");
    return Word{v};
}

BigInt wrap(BigInt v)
{
    v %= modulus();
    if (v < 0)
        v += modulus();
    return v;
}

BigInt signed_of(const Word& w)
{
    const BigInt v{w};
    return v >= (modulus() >> 1) ? v - modulus() : v;
}

Word from_signed(const BigInt& v)
{
    return narrow(wrap(v));
}

Word bool_word(bool b)
{
    return b ? Word{1} : Word{0};
}

BigInt pow_mod(BigInt base, BigInt exp)
{
    BigInt result = 1;
    base = wrap(base);
    while (exp > 0)
    {
        if ((exp & 1) != 0)
            result = wrap(result * base);
        base = wrap(base * base);
        exp >>= 1;
    }
    return result;
}

/// Evaluates an arithmetic opcode on operands given top first.
Word arithmetic(uint8_t op, const std::vector<Word>& a)
{
    const BigInt x{a[0]};
    const BigInt y = a.size() > 1 ? BigInt{a[1]} : BigInt{0};
    switch (op)
    {
    case OP_ADD:
        return narrow(wrap(x + y));
    case OP_MUL:
        return narrow(wrap(x * y));
    case OP_SUB:
        return narrow(wrap(x - y));
    case OP_DIV:
        return y == 0 ? Word{0} : narrow(x / y);
    case OP_SDIV:
    {
        if (y == 0)
            return 0;
        const auto sx = signed_of(a[0]);
        const auto sy = signed_of(a[1]);
        // cpp_int division truncates toward zero, as the EVM requires.
        return from_signed(sx / sy);
    }
    case OP_MOD:
        return y == 0 ? Word{0} : narrow(x % y);
    case OP_SMOD:
    {
        if (y == 0)
            return 0;
        const auto sx = signed_of(a[0]);
        const auto sy = signed_of(a[1]);
        BigInt r = abs(sx) % abs(sy);
        return from_signed(sx < 0 ? -r : r);
    }
    case OP_ADDMOD:
    {
        const BigInt n{a[2]};
        return n == 0 ? Word{0} : narrow((x + y) % n);
    }
    case OP_MULMOD:
    {
        const BigInt n{a[2]};
        return n == 0 ? Word{0} : narrow((x * y) % n);
    }
    case OP_EXP:
        return narrow(pow_mod(x, y));
    case OP_SIGNEXTEND:
    {
        if (x >= 31)
            return a[1];
        const unsigned bits = static_cast<unsigned>(x) * 8 + 7;
        const BigInt low_mask = (BigInt{1} << bits) - 1;
        const bool negative = bit_test(y, bits);
        return negative ? narrow(y | (modulus() - 1 - low_mask)) : narrow(y & low_mask);
    }
    case OP_LT:
        return bool_word(x < y);
    case OP_GT:
        return bool_word(x > y);
    case OP_SLT:
        return bool_word(signed_of(a[0]) < signed_of(a[1]));
    case OP_SGT:
        return bool_word(signed_of(a[0]) > signed_of(a[1]));
    case OP_EQ:
        return bool_word(x == y);
    case OP_ISZERO:
        return bool_word(x == 0);
    case OP_AND:
        return narrow(x & y);
    case OP_OR:
        return narrow(x | y);
    case OP_XOR:
        return narrow(x ^ y);
    case OP_NOT:
        return narrow(modulus() - 1 - x);
    case OP_BYTE:
        return x >= 32 ? Word{0} : narrow((y >> (8 * (31 - static_cast<unsigned>(x)))) & 0xff);
    case OP_SHL:
        return x >= 256 ? Word{0} : narrow(wrap(y << static_cast<unsigned>(x)));
    case OP_SHR:
        return x >= 256 ? Word{0} : narrow(y >> static_cast<unsigned>(x));
    case OP_SAR:
    {
        const auto sy = signed_of(a[1]);
        if (x >= 256)
            return sy < 0 ? narrow(modulus() - 1) : Word{0};
        // Arithmetic shift rounds toward negative infinity.
        const auto shift = static_cast<unsigned>(x);
        return from_signed(sy < 0 ? BigInt{-((-sy - 1) >> shift) - 1} : BigInt{sy >> shift});
    }
    default:
        throw std::logic_error("not an arithmetic opcode");
    }
}

bool is_arithmetic(uint8_t op)
{
    return (op >= OP_ADD && op <= OP_SIGNEXTEND) || (op >= OP_LT && op <= OP_SAR);
}

class Machine
{
public:
    Machine(const InstructionStream& stream, const EnvScript& env) : stream_{stream}, env_{env}
    {
        state_.storage = env.storage;
    }

    Trace run()
    {
        Trace trace;
        for (;;)
        {
            if (trace.states.size() >= env_.step_limit)
            {
                trace.halt = HaltReason::StepLimit;
                break;
            }
            trace.states.push_back(state_);
            if (const auto halt = step())
            {
                trace.halt = *halt;
                break;
            }
        }
        trace.final_storage = is_exceptional(trace.halt) || trace.halt == HaltReason::Revert ? env_.storage
                                                                                              : state_.storage;
        trace.return_data = output_;
        return trace;
    }

private:
    Word pop()
    {
        Word w = state_.stack.front();
        state_.stack.erase(state_.stack.begin());
        return w;
    }
    void push(Word w) { state_.stack.insert(state_.stack.begin(), std::move(w)); }

    /// Grows memory to cover [offset, offset + size); false past the limit.
    bool touch(const Word& offset, const Word& size)
    {
        if (size == 0)
            return true;
        const BigInt end = BigInt{offset} + BigInt{size};
        if (end > env_.memory_limit)
            return false;
        const auto needed = static_cast<size_t>((end + 31) / 32 * 32);
        if (state_.memory.size() < needed)
            state_.memory.resize(needed, 0);
        return true;
    }

    Bytes read_memory(const Word& offset, const Word& size) const
    {
        if (size == 0)
            return {};
        const auto o = static_cast<size_t>(offset);
        return Bytes(state_.memory.begin() + static_cast<std::ptrdiff_t>(o),
            state_.memory.begin() + static_cast<std::ptrdiff_t>(o + static_cast<size_t>(size)));
    }

    /// Copies `source[from..from+size)` (zero beyond its end) to memory.
    void copy_to_memory(const Word& dest, const Bytes& source, const Word& from, const Word& size)
    {
        const auto d = static_cast<size_t>(dest);
        const auto n = static_cast<size_t>(size);
        for (size_t i = 0; i < n; ++i)
        {
            const BigInt src = BigInt{from} + i;
            state_.memory[d + i] = src < source.size() ? source[static_cast<size_t>(src)] : 0;
        }
    }

    Word calldata_word(const Word& offset) const
    {
        std::array<uint8_t, 32> bytes{};
        for (size_t i = 0; i < 32; ++i)
        {
            const BigInt src = BigInt{offset} + i;
            if (src < env_.calldata.size())
                bytes[i] = env_.calldata[static_cast<size_t>(src)];
        }
        return word_from_bytes(bytes);
    }

    CallResult next_call()
    {
        if (calls_used_ < env_.calls.size())
            return env_.calls[calls_used_++];
        ++calls_used_;
        return {};
    }

    std::optional<HaltReason> jump_to(const Word& target)
    {
        if (target >= stream_.code().size() + 1 || !stream_.is_jumpdest(static_cast<uint64_t>(target)))
            return HaltReason::BadJump;
        state_.pc = static_cast<uint64_t>(target);
        return std::nullopt;
    }

    std::optional<HaltReason> step()
    {
        const auto* ins = stream_.at(state_.pc);
        if (!ins)
            return HaltReason::Stop;
        const auto& info = stream_.info(*ins);
        const uint8_t op = ins->opcode;
        if (!info.defined)
            return HaltReason::Invalid;
        if (op == OP_EXTCODECOPY || op == OP_EXTCODEHASH)
            throw UnsupportedOpcode(state_.pc, op);
        if (state_.stack.size() < info.pops)
            return HaltReason::StackUnderflow;
        if (state_.stack.size() - info.pops + info.pushes > 1024)
            return HaltReason::StackOverflow;
        const uint64_t next = ins->next_pc();

        if (is_push(op))
        {
            push(ins->immediate_word());
            state_.pc = next;
            return std::nullopt;
        }
        if (is_dup(op))
        {
            push(state_.stack[op - OP_DUP1]);
            state_.pc = next;
            return std::nullopt;
        }
        if (is_swap(op))
        {
            std::swap(state_.stack[0], state_.stack[op - OP_SWAP1 + 1]);
            state_.pc = next;
            return std::nullopt;
        }
        if (is_arithmetic(op))
        {
            std::vector<Word> args;
            for (uint8_t i = 0; i < info.pops; ++i)
                args.push_back(pop());
            push(arithmetic(op, args));
            state_.pc = next;
            return std::nullopt;
        }
        if (is_log(op))
        {
            const auto offset = pop();
            const auto size = pop();
            for (int i = 0; i < op - OP_LOG0; ++i)
                pop();
            if (!touch(offset, size))
                return HaltReason::MemoryLimit;
            state_.pc = next;
            return std::nullopt;
        }

        switch (op)
        {
        case OP_STOP:
            return HaltReason::Stop;
        case OP_SHA3:
        {
            const auto offset = pop();
            const auto size = pop();
            if (!touch(offset, size))
                return HaltReason::MemoryLimit;
            const auto data = read_memory(offset, size);
            push(word_from_bytes(keccak256(data)));
            break;
        }
        case OP_ADDRESS:
            push(env_.address);
            break;
        case OP_BALANCE:
        case OP_EXTCODESIZE:
            pop();
            push(op == OP_BALANCE ? env_.balance : env_.extcodesize);
            break;
        case OP_SELFBALANCE:
            push(env_.balance);
            break;
        case OP_ORIGIN:
            push(env_.origin);
            break;
        case OP_CALLER:
            push(env_.caller);
            break;
        case OP_CALLVALUE:
            push(env_.callvalue);
            break;
        case OP_CALLDATALOAD:
            push(calldata_word(pop()));
            break;
        case OP_CALLDATASIZE:
            push(env_.calldata.size());
            break;
        case OP_CODESIZE:
            push(stream_.code().size());
            break;
        case OP_CALLDATACOPY:
        case OP_CODECOPY:
        case OP_RETURNDATACOPY:
        {
            const auto dest = pop();
            const auto from = pop();
            const auto size = pop();
            const Bytes& source =
                op == OP_CALLDATACOPY ? env_.calldata : (op == OP_CODECOPY ? stream_.code() : returndata_);
            if (op == OP_RETURNDATACOPY && BigInt{from} + BigInt{size} > returndata_.size())
                return HaltReason::Invalid;
            if (!touch(dest, size))
                return HaltReason::MemoryLimit;
            copy_to_memory(dest, source, from, size);
            break;
        }
        case OP_GASPRICE:
            push(env_.gasprice);
            break;
        case OP_RETURNDATASIZE:
            push(returndata_.size());
            break;
        case OP_BLOCKHASH:
            pop();
            push(0);
            break;
        case OP_COINBASE:
            push(env_.coinbase);
            break;
        case OP_TIMESTAMP:
            push(env_.timestamp);
            break;
        case OP_NUMBER:
            push(env_.number);
            break;
        case OP_DIFFICULTY:
            push(env_.difficulty);
            break;
        case OP_GASLIMIT:
            push(env_.gaslimit);
            break;
        case OP_CHAINID:
            push(env_.chainid);
            break;
        case OP_BASEFEE:
            push(0);
            break;
        case OP_POP:
            pop();
            break;
        case OP_MLOAD:
        {
            const auto offset = pop();
            if (!touch(offset, 32))
                return HaltReason::MemoryLimit;
            push(word_from_bytes(read_memory(offset, 32)));
            break;
        }
        case OP_MSTORE:
        {
            const auto offset = pop();
            const auto value = pop();
            if (!touch(offset, 32))
                return HaltReason::MemoryLimit;
            const auto bytes = word_to_bytes(value);
            std::copy(bytes.begin(), bytes.end(),
                state_.memory.begin() + static_cast<std::ptrdiff_t>(static_cast<size_t>(offset)));
            break;
        }
        case OP_MSTORE8:
        {
            const auto offset = pop();
            const auto value = pop();
            if (!touch(offset, 1))
                return HaltReason::MemoryLimit;
            state_.memory[static_cast<size_t>(offset)] = static_cast<uint8_t>(value & 0xff);
            break;
        }
        case OP_SLOAD:
        {
            const auto key = pop();
            const auto it = state_.storage.find(key);
            push(it == state_.storage.end() ? Word{0} : it->second);
            break;
        }
        case OP_SSTORE:
        {
            const auto key = pop();
            const auto value = pop();
            if (value == 0)
                state_.storage.erase(key);
            else
                state_.storage[key] = value;
            break;
        }
        case OP_JUMP:
            return jump_to(pop());
        case OP_JUMPI:
        {
            const auto target = pop();
            const auto cond = pop();
            if (cond != 0)
                return jump_to(target);
            break;
        }
        case OP_PC:
            push(state_.pc);
            break;
        case OP_MSIZE:
            push(state_.memory.size());
            break;
        case OP_GAS:
            push(env_.gas);
            break;
        case OP_JUMPDEST:
            break;
        case OP_CALL:
        case OP_CALLCODE:
        case OP_DELEGATECALL:
        case OP_STATICCALL:
        {
            pop();  // gas
            pop();  // address
            if (op == OP_CALL || op == OP_CALLCODE)
                pop();  // value
            const auto in_offset = pop();
            const auto in_size = pop();
            const auto out_offset = pop();
            const auto out_size = pop();
            if (!touch(in_offset, in_size) || !touch(out_offset, out_size))
                return HaltReason::MemoryLimit;
            const auto result = next_call();
            state_.called = true;
            returndata_ = result.return_data;
            const Word n = out_size < returndata_.size() ? out_size : Word{returndata_.size()};
            copy_to_memory(out_offset, returndata_, 0, n);
            push(bool_word(result.success));
            break;
        }
        case OP_CREATE:
        case OP_CREATE2:
        {
            pop();  // value
            const auto offset = pop();
            const auto size = pop();
            if (op == OP_CREATE2)
                pop();  // salt
            if (!touch(offset, size))
                return HaltReason::MemoryLimit;
            const auto result = next_call();
            state_.called = true;
            returndata_ = result.success ? Bytes{} : result.return_data;
            push(result.success ? Word{0xc0de0000 + calls_used_} : Word{0});
            break;
        }
        case OP_RETURN:
        case OP_REVERT:
        {
            const auto offset = pop();
            const auto size = pop();
            if (!touch(offset, size))
                return HaltReason::MemoryLimit;
            output_ = read_memory(offset, size);
            return op == OP_RETURN ? HaltReason::Return : HaltReason::Revert;
        }
        case OP_SELFDESTRUCT:
            pop();
            return HaltReason::SelfDestruct;
        case OP_INVALID:
            return HaltReason::Invalid;
        default:
            throw UnsupportedOpcode(state_.pc, op);
        }
        state_.pc = next;
        return std::nullopt;
    }

    const InstructionStream& stream_;
    const EnvScript& env_;
    ConcreteState state_;
    Bytes returndata_;
    Bytes output_;
    size_t calls_used_ = 0;
};
}  // namespace

std::string_view to_string(HaltReason r) noexcept
{
    return halt_names[static_cast<size_t>(r)];
}

std::optional<HaltReason> parse_halt_reason(std::string_view name) noexcept
{
    for (size_t i = 0; i < halt_names.size(); ++i)
        if (halt_names[i] == name)
            return static_cast<HaltReason>(i);
    return std::nullopt;
}

bool is_exceptional(HaltReason r) noexcept
{
    return r != HaltReason::Stop && r != HaltReason::Return && r != HaltReason::SelfDestruct &&
           r != HaltReason::Revert;
}

UnsupportedOpcode::UnsupportedOpcode(uint64_t pc, uint8_t opcode)
  : std::runtime_error{"unsupported opcode 0x" + bytes_to_hex(std::array<uint8_t, 1>{opcode}).substr(2) +
                       " at pc " + std::to_string(pc)},
    pc_{pc},
    opcode_{opcode}
{}

Trace exec_concrete(const InstructionStream& stream, const EnvScript& env)
{
    return Machine{stream, env}.run();
}

std::string dump_trace(const Trace& trace)
{
    std::ostringstream out;
    for (const auto& s : trace.states)
    {
        out << "pc=" << s.pc << " stack=[";
        for (size_t i = 0; i < s.stack.size(); ++i)
            out << (i ? "," : "") << to_hex(s.stack[i]);
        out << "] called=" << (s.called ? 1 : 0) << '\n';
    }
    out << "halt=" << to_string(trace.halt) << '\n';
    return out.str();
}

}  // namespace evmhorn::oracle
