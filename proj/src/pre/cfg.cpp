// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/pre/cfg.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace evmhorn::pre
{
using namespace evm;

namespace
{
struct Step
{
    std::vector<std::pair<Successor, AbstractStack>> out;
    bool unresolved_jump = false;
    std::vector<Word> invalid_targets;
    bool any_valid_target = false;
};

void add_jump_targets(const InstructionStream& stream, const ValueSet& target, uint32_t height,
    EdgeKind kind, const AbstractStack& rest, Step& step)
{
    if (target.is_top())
    {
        step.unresolved_jump = true;
        return;
    }
    for (const auto& t : target.values())
    {
        if (t < stream.code().size() && stream.is_jumpdest(static_cast<uint64_t>(t)))
        {
            step.out.push_back({Successor{{static_cast<uint64_t>(t), height}, kind}, rest});
            step.any_valid_target = true;
        }
        else
        {
            step.invalid_targets.push_back(t);
        }
    }
}

Step transfer(const InstructionStream& stream, StateKey key, const AbstractStack& stack, size_t cap)
{
    Step step;
    const auto* ins = stream.at(key.pc);
    if (ins == nullptr)
        return step;  // implicit STOP past the end of code

    const auto& info = stream.info(*ins);
    const auto h = static_cast<uint32_t>(stack.size());
    if (h < info.pops)
        return step;  // stack underflow: exceptional halt
    const uint32_t next_height = h - info.pops + info.pushes;
    if (next_height > max_stack_height)
        return step;  // stack overflow: exceptional halt

    const uint8_t op = ins->opcode;
    if (op == OP_JUMP)
    {
        const AbstractStack rest(stack.begin() + 1, stack.end());
        add_jump_targets(stream, stack[0], next_height, EdgeKind::Jump, rest, step);
        return step;
    }
    if (op == OP_JUMPI)
    {
        const AbstractStack rest(stack.begin() + 2, stack.end());
        const auto& condition = stack[1];
        if (condition.may_be_nonzero())
            add_jump_targets(stream, stack[0], next_height, EdgeKind::BranchTaken, rest, step);
        if (condition.may_be_zero())
            step.out.push_back({Successor{{ins->next_pc(), next_height}, EdgeKind::BranchNotTaken}, rest});
        return step;
    }
    if (info.terminator)
        return step;

    AbstractStack next;
    next.reserve(next_height);
    if (info.immediate > 0 || (op == OP_PUSH0 && info.defined))
    {
        next.push_back(ValueSet::of(ins->immediate_word()));
        next.insert(next.end(), stack.begin(), stack.end());
    }
    else if (is_dup(op))
    {
        next.push_back(stack[op - OP_DUP1]);
        next.insert(next.end(), stack.begin(), stack.end());
    }
    else if (is_swap(op))
    {
        next = stack;
        std::swap(next[0], next[op - OP_SWAP1 + 1]);
    }
    else
    {
        ValueSet produced = ValueSet::top();
        if (const auto kind = arithmetic_op(op); kind && is_core_op(*kind))
            produced = apply(*kind, std::span{stack}.first(op_arity(*kind)), cap);
        else if (op == OP_PC)
            produced = ValueSet::of(Word{key.pc});
        for (uint8_t i = 0; i < info.pushes; ++i)
            next.push_back(produced);
        next.insert(next.end(), stack.begin() + info.pops, stack.end());
    }
    step.out.push_back({Successor{{ins->next_pc(), next_height}, EdgeKind::Fallthrough}, std::move(next)});
    return step;
}

bool join_into(AbstractStack& into, const AbstractStack& from, size_t cap)
{
    bool changed = false;
    for (size_t i = 0; i < into.size(); ++i)
    {
        auto joined = into[i].join(from[i], cap);
        if (!(joined == into[i]))
        {
            into[i] = std::move(joined);
            changed = true;
        }
    }
    return changed;
}
}  // namespace

Cfg reconstruct_cfg(const InstructionStream& stream, const PreanalysisConfig& config)
{
    if (config.value_set_cap == 0 || config.max_heights == 0)
        throw ConfigError("preanalysis caps must be positive");

    Cfg cfg;
    cfg.stream = stream;
    cfg.skeleton = split_basic_blocks(stream);
    cfg.config = config;

    std::deque<StateKey> work;
    std::set<StateKey> queued;
    auto enqueue = [&](StateKey k) {
        if (queued.insert(k).second)
            work.push_back(k);
    };

    const StateKey entry{0, 0};
    cfg.states[entry] = {};
    cfg.heights[0].insert(0);
    enqueue(entry);

    while (!work.empty())
    {
        const StateKey key = work.front();
        work.pop_front();
        queued.erase(key);

        const AbstractStack current = cfg.states.at(key);
        auto step = transfer(stream, key, current, config.value_set_cap);
        for (auto& [succ, stack] : step.out)
        {
            auto [it, inserted] = cfg.states.try_emplace(succ.to, stack);
            if (inserted)
            {
                auto& hs = cfg.heights[succ.to.pc];
                hs.insert(succ.to.height);
                if (hs.size() > config.max_heights)
                {
                    throw AnalysisError({Diagnostic{DiagnosticKind::HeightOverflow, succ.to.pc,
                        "more than " + std::to_string(config.max_heights) +
                            " distinct stack heights reach this instruction"}});
                }
                enqueue(succ.to);
            }
            else if (join_into(it->second, stack, config.value_set_cap))
            {
                enqueue(succ.to);
            }
        }
    }

    // Edges and findings are read off the stabilized states.
    std::vector<Diagnostic> errors;
    for (const auto& [key, stack] : cfg.states)
    {
        auto step = transfer(stream, key, stack, config.value_set_cap);
        auto& succs = cfg.successors[key];
        for (auto& [succ, _] : step.out)
        {
            if (std::find(succs.begin(), succs.end(), succ) == succs.end())
                succs.push_back(succ);
            if (succ.kind == EdgeKind::Jump || succ.kind == EdgeKind::BranchTaken)
                cfg.jump_edges[key.pc].insert(succ.to.pc);
        }
        if (step.unresolved_jump)
        {
            const bool known = std::any_of(errors.begin(), errors.end(),
                [&](const Diagnostic& d) { return d.pc == key.pc; });
            if (!known)
            {
                errors.push_back({DiagnosticKind::UnreconstructableControlFlow, key.pc,
                    "jump target is not statically determined"});
            }
        }
        if (!step.invalid_targets.empty() && !step.any_valid_target && !step.unresolved_jump)
        {
            std::string targets;
            for (const auto& t : step.invalid_targets)
                targets += (targets.empty() ? "" : ", ") + to_hex(t);
            Diagnostic d{DiagnosticKind::InvalidJumpTarget, key.pc,
                "no valid destination among {" + targets + "}; treated as exceptional halt"};
            if (std::find(cfg.diagnostics.begin(), cfg.diagnostics.end(), d) == cfg.diagnostics.end())
                cfg.diagnostics.push_back(std::move(d));
        }
    }
    if (!errors.empty())
        throw AnalysisError(std::move(errors));
    return cfg;
}

void propagate_constants(Cfg& cfg)
{
    cfg.const_map.clear();
    for (const auto& [key, stack] : cfg.states)
    {
        for (uint32_t slot = 0; slot < stack.size(); ++slot)
        {
            const auto k = std::make_pair(key.pc, slot);
            auto it = cfg.const_map.find(k);
            if (it == cfg.const_map.end())
                cfg.const_map.emplace(k, stack[slot]);
            else
                it->second = it->second.join(stack[slot], cfg.config.value_set_cap);
        }
    }
}

void catalog_tracked_cells(Cfg& cfg)
{
    std::set<Word> storage;
    std::set<Word> memory;
    for (const auto& [key, stack] : cfg.states)
    {
        const auto* ins = cfg.stream.at(key.pc);
        if (ins == nullptr || stack.empty())
            continue;
        const auto c = stack[0].singleton();
        if (!c)
            continue;
        switch (ins->opcode)
        {
        case OP_SLOAD:
        case OP_SSTORE:
            storage.insert(*c);
            break;
        case OP_MLOAD:
        case OP_MSTORE:
            if ((*c % 32) == 0)
                memory.insert(*c);
            break;
        default:
            break;
        }
    }

    auto cap = [&](std::set<Word>& cells, std::string_view what) {
        if (cells.size() <= cfg.config.max_tracked_cells)
            return;
        const auto dropped = cells.size() - cfg.config.max_tracked_cells;
        auto it = cells.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(cfg.config.max_tracked_cells));
        cells.erase(it, cells.end());
        cfg.diagnostics.push_back({DiagnosticKind::TrackedCellsCapped, std::nullopt,
            std::to_string(dropped) + " " + std::string{what} + " left to the summary cell"});
    };
    cap(storage, "storage keys");
    cap(memory, "memory offsets");
    cfg.tracked_storage_keys = std::move(storage);
    cfg.tracked_memory_offsets = std::move(memory);
}

Cfg run_preanalysis(const InstructionStream& stream, const PreanalysisConfig& config)
{
    auto cfg = reconstruct_cfg(stream, config);
    propagate_constants(cfg);
    catalog_tracked_cells(cfg);
    return cfg;
}

namespace
{
std::string dot_escape(std::string_view s)
{
    std::string out;
    for (const char c : s)
    {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string_view edge_label(EdgeKind kind)
{
    switch (kind)
    {
    case EdgeKind::Jump:
    case EdgeKind::BranchTaken:
        return "jump";
    default:
        return "fall";
    }
}
}  // namespace

std::string export_cfg_dot(const Cfg& cfg)
{
    const auto& stream = cfg.stream;
    const auto& blocks = cfg.skeleton.blocks;
    std::ostringstream out;
    out << "digraph cfg {\n";
    if (!blocks.empty())
        out << "  node [shape=box, fontname=\"monospace\"];\n";
    for (const auto& b : blocks)
    {
        std::string label;
        for (size_t i = b.first; i <= b.last; ++i)
        {
            const auto& ins = stream.instructions()[i];
            const auto& info = stream.info(ins);
            std::string line = std::to_string(ins.pc) + ": " + std::string{info.name};
            if (info.immediate > 0)
                line += " " + bytes_to_hex(ins.immediate);
            label += dot_escape(line) + "\\l";
        }
        out << "  b" << b.entry << " [label=\"" << label << "\"";
        if (!cfg.reachable(b.entry))
            out << ", style=dashed";
        out << "];\n";
    }

    std::set<std::tuple<uint64_t, uint64_t, std::string_view>> edges;
    for (const auto& [key, succs] : cfg.successors)
    {
        const auto from = cfg.skeleton.block_of(stream, key.pc);
        if (from < 0)
            continue;
        for (const auto& s : succs)
        {
            const auto to = cfg.skeleton.block_of(stream, s.to.pc);
            if (to < 0 || (to == from && s.kind == EdgeKind::Fallthrough))
                continue;
            const auto& to_block = blocks[static_cast<size_t>(to)];
            if (to_block.entry != s.to.pc)
                continue;
            edges.emplace(blocks[static_cast<size_t>(from)].entry, to_block.entry, edge_label(s.kind));
        }
    }
    for (const auto& [from, to, label] : edges)
        out << "  b" << from << " -> b" << to << " [label=\"" << label << "\"];\n";
    out << "}\n";
    return out.str();
}

nlohmann::json cfg_to_json(const Cfg& cfg)
{
    using nlohmann::json;
    json j;
    j["instructions"] = cfg.stream.instructions().size();
    json blocks = json::array();
    for (const auto& b : cfg.skeleton.blocks)
    {
        blocks.push_back({{"entry", b.entry},
            {"last_pc", cfg.stream.instructions()[b.last].pc},
            {"reachable", cfg.reachable(b.entry)}});
    }
    j["blocks"] = std::move(blocks);
    json fall = json::array();
    for (const auto& [a, b] : cfg.skeleton.fallthrough)
        fall.push_back({cfg.skeleton.blocks[a].entry, cfg.skeleton.blocks[b].entry});
    j["fallthrough"] = std::move(fall);
    json edges = json::object();
    for (const auto& [pc, targets] : cfg.jump_edges)
        edges[std::to_string(pc)] = targets;
    j["jump_edges"] = std::move(edges);
    json heights = json::object();
    for (const auto& [pc, hs] : cfg.heights)
        heights[std::to_string(pc)] = hs;
    j["heights"] = std::move(heights);
    json storage = json::array();
    for (const auto& k : cfg.tracked_storage_keys)
        storage.push_back(to_hex(k));
    j["tracked_storage_keys"] = std::move(storage);
    json memory = json::array();
    for (const auto& k : cfg.tracked_memory_offsets)
        memory.push_back(to_hex(k));
    j["tracked_memory_offsets"] = std::move(memory);
    return j;
}

}  // namespace evmhorn::pre
