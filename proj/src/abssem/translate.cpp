// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/abssem/translate.hpp"

#include <algorithm>

namespace evmhorn::abssem
{
using namespace evm;
using horn::Atom;
using horn::Clause;
using horn::Guard;
using horn::LinExpr;
using horn::Rel;
using horn::Term;

std::optional<size_t> StateLayout::memory_index(const Word& offset) const
{
    const auto it = std::lower_bound(memory_offsets.begin(), memory_offsets.end(), offset);
    if (it == memory_offsets.end() || *it != offset)
        return std::nullopt;
    return static_cast<size_t>(it - memory_offsets.begin());
}

std::optional<size_t> StateLayout::storage_index(const Word& key) const
{
    const auto it = std::lower_bound(storage_keys.begin(), storage_keys.end(), key);
    if (it == storage_keys.end() || *it != key)
        return std::nullopt;
    return static_cast<size_t>(it - storage_keys.begin());
}

std::string predicate_name(uint64_t pc, uint32_t height)
{
    return "S_" + std::to_string(pc) + "_" + std::to_string(height);
}

namespace
{
/// Symbolic successor state built from the body variables.
struct AbsState
{
    Term mode;
    Term called;
    std::vector<Term> stack;  // top first
    std::vector<Term> memory;
    Term memory_summary;
    std::vector<Term> storage;
    Term storage_summary;

    std::vector<Term> args() const
    {
        std::vector<Term> out{mode, called};
        out.insert(out.end(), stack.begin(), stack.end());
        out.insert(out.end(), memory.begin(), memory.end());
        out.push_back(memory_summary);
        out.insert(out.end(), storage.begin(), storage.end());
        out.push_back(storage_summary);
        return out;
    }

    void pop(size_t n) { stack.erase(stack.begin(), stack.begin() + static_cast<std::ptrdiff_t>(n)); }
    void push(Term t) { stack.insert(stack.begin(), std::move(t)); }

    void havoc_memory()
    {
        std::fill(memory.begin(), memory.end(), Term::top());
        memory_summary = Term::top();
    }
    void havoc_storage()
    {
        std::fill(storage.begin(), storage.end(), Term::top());
        storage_summary = Term::top();
    }
};

AbsState body_state(const RuleContext& ctx, pre::StateKey key)
{
    const auto& layout = ctx.layout;
    const auto h = key.height;
    const auto* stack = ctx.cfg.state(key);
    AbsState s;
    s.mode = Term::variable(StateLayout::mode);
    s.called = Term::variable(StateLayout::called);
    for (uint32_t i = 0; i < h; ++i)
    {
        std::optional<Word> c;
        if (ctx.config.use_preanalysis_constants && stack)
            c = (*stack)[i].singleton();
        s.stack.push_back(c ? Term::literal(*c) : Term::variable(StateLayout::stack(i)));
    }
    for (size_t j = 0; j < layout.memory_offsets.size(); ++j)
        s.memory.push_back(Term::variable(layout.memory(h, j)));
    s.memory_summary = Term::variable(layout.memory_summary(h));
    for (size_t j = 0; j < layout.storage_keys.size(); ++j)
        s.storage.push_back(Term::variable(layout.storage(h, j)));
    s.storage_summary = Term::variable(layout.storage_summary(h));
    return s;
}

AbsState entry_state(const StateLayout& layout, uint64_t mode)
{
    AbsState s;
    s.mode = Term::literal(mode);
    s.called = Term::literal(0);
    s.memory.assign(layout.memory_offsets.size(), Term::literal(0));
    s.memory_summary = Term::literal(0);
    s.storage.assign(layout.storage_keys.size(), Term::top());
    s.storage_summary = Term::top();
    return s;
}

std::string mnemonic(const RuleContext& ctx, uint64_t pc)
{
    const auto* ins = ctx.cfg.stream.at(pc);
    return ins ? std::string{ctx.cfg.stream.info(*ins).name} : "STOP";
}

Clause make_clause(std::string label, pre::StateKey from, std::vector<Guard> guards, pre::StateKey to,
    const AbsState& head)
{
    Clause c;
    c.label = std::move(label);
    c.body = predicate_name(from.pc, from.height);
    c.guards = std::move(guards);
    c.head = Atom{predicate_name(to.pc, to.height), head.args()};
    return c;
}

Guard compare(Rel rel, Term t, const Word& value)
{
    return Guard{rel, LinExpr::of(std::move(t)), LinExpr::number(BigInt{value})};
}

std::optional<Word> singleton_operand(const RuleContext& ctx, pre::StateKey key, size_t slot)
{
    const auto* stack = ctx.cfg.state(key);
    if (!stack || slot >= stack->size())
        return std::nullopt;
    return (*stack)[slot].singleton();
}

const std::vector<pre::Successor>& successors(const RuleContext& ctx, pre::StateKey key)
{
    static const std::vector<pre::Successor> none;
    const auto it = ctx.cfg.successors.find(key);
    return it == ctx.cfg.successors.end() ? none : it->second;
}

/// The instruction at `key` runs (no stack underflow or overflow).
bool executes(const RuleContext& ctx, pre::StateKey key)
{
    const auto* ins = ctx.cfg.stream.at(key.pc);
    if (!ins)
        return true;
    const auto& info = ctx.cfg.stream.info(*ins);
    return key.height >= info.pops && key.height - info.pops + info.pushes <= pre::max_stack_height;
}

bool is_halt(uint8_t op)
{
    return op == OP_STOP || op == OP_RETURN || op == OP_SELFDESTRUCT;
}

bool writes_memory_in_bulk(uint8_t op)
{
    return op == OP_MSTORE8 || op == OP_CALLDATACOPY || op == OP_CODECOPY || op == OP_RETURNDATACOPY ||
           op == OP_EXTCODECOPY;
}
}  // namespace

std::vector<Clause> rule_for_instruction(const RuleContext& ctx, pre::StateKey key)
{
    std::vector<Clause> out;
    const auto* ins = ctx.cfg.stream.at(key.pc);
    if (!ins || !executes(ctx, key))
        return out;
    const auto& info = ctx.cfg.stream.info(*ins);
    const uint8_t op = ins->opcode;
    if (!info.defined || is_call_class(op))
        return out;

    const auto label = std::to_string(key.pc) + ":" + std::string{info.name};
    const auto& succs = successors(ctx, key);

    if (op == OP_JUMP || op == OP_JUMPI)
    {
        const auto body = body_state(ctx, key);
        const bool target_known = singleton_operand(ctx, key, 0).has_value();
        for (const auto& s : succs)
        {
            AbsState head = body;
            head.pop(op == OP_JUMP ? 1 : 2);
            std::vector<Guard> guards;
            std::string suffix;
            if (s.kind == pre::EdgeKind::BranchNotTaken)
            {
                if (!body.stack[1].is_lit())
                    guards.push_back(compare(Rel::Eq, body.stack[1], 0));
                suffix = ":fall";
            }
            else
            {
                if (op == OP_JUMPI && !body.stack[1].is_lit())
                    guards.push_back(compare(Rel::Ne, body.stack[1], 0));
                if (!target_known)
                    guards.push_back(compare(Rel::Eq, body.stack[0], Word{s.to.pc}));
                suffix = ":jump@" + std::to_string(s.to.pc);
            }
            out.push_back(make_clause(label + suffix, key, std::move(guards), s.to, head));
        }
        return out;
    }

    if (info.terminator)
        return out;

    const auto next = std::find_if(succs.begin(), succs.end(),
        [](const pre::Successor& s) { return s.kind == pre::EdgeKind::Fallthrough; });
    if (next == succs.end())
        return out;

    AbsState head = body_state(ctx, key);
    const auto& layout = ctx.layout;
    if (info.immediate > 0 || op == OP_PUSH0)
    {
        head.push(Term::literal(ins->immediate_word()));
    }
    else if (is_dup(op))
    {
        head.push(head.stack[op - OP_DUP1]);
    }
    else if (is_swap(op))
    {
        std::swap(head.stack[0], head.stack[op - OP_SWAP1 + 1]);
    }
    else if (const auto kind = arithmetic_op(op))
    {
        std::vector<Term> args(head.stack.begin(), head.stack.begin() + static_cast<std::ptrdiff_t>(op_arity(*kind)));
        auto t = Term::apply(*kind, std::move(args));
        head.pop(op_arity(*kind));
        head.push(horn::encodable(t) ? std::move(t) : Term::top());
    }
    else if (op == OP_PC)
    {
        head.push(Term::literal(key.pc));
    }
    else if (op == OP_MLOAD)
    {
        const auto offset = singleton_operand(ctx, key, 0);
        const auto j = offset ? layout.memory_index(*offset) : std::nullopt;
        head.pop(1);
        head.push(j ? head.memory[*j] : Term::top());
    }
    else if (op == OP_MSTORE)
    {
        const auto offset = singleton_operand(ctx, key, 0);
        const auto j = offset ? layout.memory_index(*offset) : std::nullopt;
        const auto value = head.stack[1];
        head.pop(2);
        if (j)
            head.memory[*j] = value;
        else
            head.havoc_memory();
    }
    else if (op == OP_SLOAD)
    {
        const auto k = singleton_operand(ctx, key, 0);
        head.pop(1);
        if (!k)
            head.push(Term::top());
        else if (const auto j = layout.storage_index(*k))
            head.push(head.storage[*j]);
        else
            head.push(head.storage_summary);
    }
    else if (op == OP_SSTORE)
    {
        const auto k = singleton_operand(ctx, key, 0);
        const auto value = head.stack[1];
        head.pop(2);
        if (!k)
            head.havoc_storage();
        else if (const auto j = layout.storage_index(*k))
            head.storage[*j] = value;
        else
            head.storage_summary = Term::top();
    }
    else
    {
        if (writes_memory_in_bulk(op))
            head.havoc_memory();
        head.pop(info.pops);
        for (uint8_t i = 0; i < info.pushes; ++i)
            head.push(Term::top());
    }
    out.push_back(make_clause(label, key, {}, next->to, head));
    return out;
}

std::vector<Clause> call_effect_clauses(const RuleContext& ctx, pre::StateKey key)
{
    std::vector<Clause> out;
    const auto* ins = ctx.cfg.stream.at(key.pc);
    if (!ins || !is_call_class(ins->opcode) || !executes(ctx, key))
        return out;
    const auto& info = ctx.cfg.stream.info(*ins);
    const uint8_t op = ins->opcode;
    const auto label = std::to_string(key.pc) + ":" + std::string{info.name};
    const auto body = body_state(ctx, key);

    const auto& succs = successors(ctx, key);
    const auto next = std::find_if(succs.begin(), succs.end(),
        [](const pre::Successor& s) { return s.kind == pre::EdgeKind::Fallthrough; });
    if (next != succs.end())
    {
        AbsState ok = body;
        ok.pop(info.pops);
        ok.push(Term::top());
        ok.called = Term::literal(1);
        ok.havoc_memory();
        if (op != OP_STATICCALL)
            ok.havoc_storage();
        out.push_back(make_clause(label + ":ok", key, {}, next->to, ok));

        AbsState fail = body;
        fail.pop(info.pops);
        fail.push(Term::literal(0));
        fail.called = Term::literal(1);
        fail.havoc_memory();
        out.push_back(make_clause(label + ":fail", key, {}, next->to, fail));
    }

    AbsState reenter = entry_state(ctx.layout, mode_reenter);
    if (!runs_in_caller_storage(op))
    {
        reenter.storage = body.storage;
        reenter.storage_summary = body.storage_summary;
    }
    out.push_back(make_clause(label + ":reenter", key, {}, {0, 0}, reenter));
    return out;
}

std::vector<Clause> entry_and_reenter_clauses(const RuleContext& ctx)
{
    std::vector<Clause> out;
    Clause entry;
    entry.label = "entry";
    entry.head = Atom{predicate_name(0, 0), entry_state(ctx.layout, mode_first).args()};
    out.push_back(std::move(entry));
    if (!ctx.contract_calls)
        return out;

    // A reentering execution that completes normally leaves its storage for
    // the next reentry into the same outer call.
    for (const auto& [key, stack] : ctx.cfg.states)
    {
        const auto* ins = ctx.cfg.stream.at(key.pc);
        if (ins && (!is_halt(ins->opcode) || !ctx.cfg.stream.info(*ins).defined))
            continue;
        if (!executes(ctx, key))
            continue;
        const auto body = body_state(ctx, key);
        AbsState next = entry_state(ctx.layout, mode_reenter);
        next.storage = body.storage;
        next.storage_summary = body.storage_summary;
        std::vector<Guard> guards{compare(Rel::Eq, Term::variable(StateLayout::mode), mode_reenter)};
        out.push_back(make_clause(std::to_string(key.pc) + ":" + mnemonic(ctx, key.pc) + ":exit", key,
            std::move(guards), {0, 0}, next));
    }
    return out;
}

ContractModel translate_contract(pre::Cfg cfg, const TranslateConfig& config)
{
    ContractModel model;
    model.cfg = std::move(cfg);
    const auto& c = model.cfg;
    model.layout.memory_offsets.assign(c.tracked_memory_offsets.begin(), c.tracked_memory_offsets.end());
    model.layout.storage_keys.assign(c.tracked_storage_keys.begin(), c.tracked_storage_keys.end());

    RuleContext ctx{c, model.layout, config, false};
    for (const auto& [key, stack] : c.states)
    {
        const auto* ins = c.stream.at(key.pc);
        if (!ins || !executes(ctx, key))
            continue;
        const uint8_t op = ins->opcode;
        if (!c.stream.info(*ins).defined)
            continue;
        if (is_call_class(op))
            ctx.contract_calls = true;
        if (is_call_class(op) || op == OP_SSTORE || op == OP_SELFDESTRUCT)
            model.sites.push_back({key, op});
    }

    auto& system = model.system;
    for (const auto& [key, stack] : c.states)
        system.predicates.push_back({predicate_name(key.pc, key.height), model.layout.arity(key.height)});
    system.clauses = entry_and_reenter_clauses(ctx);
    for (const auto& [key, stack] : c.states)
    {
        for (auto& clause : rule_for_instruction(ctx, key))
            system.clauses.push_back(std::move(clause));
        for (auto& clause : call_effect_clauses(ctx, key))
            system.clauses.push_back(std::move(clause));
    }
    return model;
}

}  // namespace evmhorn::abssem
