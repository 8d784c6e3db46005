// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/oracle/differential.hpp"

#include <algorithm>
#include <sstream>

namespace evmhorn::oracle
{
using namespace evm;
using abssem::StateLayout;
using horn::Term;

namespace
{
constexpr size_t max_reported = 16;

std::string describe(const ConcreteState& s)
{
    std::ostringstream out;
    out << "stack=[";
    for (size_t i = 0; i < s.stack.size(); ++i)
        out << (i ? "," : "") << to_hex(s.stack[i]);
    out << "] called=" << s.called;
    return out.str();
}

Word memory_word(const Bytes& memory, const Word& offset)
{
    std::array<uint8_t, 32> bytes{};
    for (size_t i = 0; i < 32; ++i)
    {
        const BigInt at = BigInt{offset} + i;
        if (at < memory.size())
            bytes[i] = memory[static_cast<size_t>(at)];
    }
    return word_from_bytes(bytes);
}

Word storage_value(const std::map<Word, Word>& storage, const Word& key)
{
    const auto it = storage.find(key);
    return it == storage.end() ? Word{0} : it->second;
}

bool in_tracked_word(const StateLayout& layout, size_t byte)
{
    return std::any_of(layout.memory_offsets.begin(), layout.memory_offsets.end(),
        [&](const Word& o) { return o <= byte && BigInt{byte} < BigInt{o} + 32; });
}

bool fact_covers(const StateLayout& layout, const std::vector<AbstractWord>& fact, const ConcreteState& s)
{
    const auto h = static_cast<uint32_t>(s.stack.size());
    if (fact.size() != layout.arity(h))
        return false;
    if (!covers(fact[StateLayout::mode], abssem::mode_first) || !covers(fact[StateLayout::called], s.called ? 1 : 0))
        return false;
    for (uint32_t i = 0; i < h; ++i)
        if (!covers(fact[StateLayout::stack(i)], s.stack[i]))
            return false;
    for (size_t j = 0; j < layout.memory_offsets.size(); ++j)
        if (!covers(fact[layout.memory(h, j)], memory_word(s.memory, layout.memory_offsets[j])))
            return false;
    if (const auto& summary = fact[layout.memory_summary(h)]; summary.is_const())
    {
        // A constant summary claims every untracked byte still holds its zero.
        if (summary.value() != 0)
            return false;
        for (size_t b = 0; b < s.memory.size(); ++b)
            if (s.memory[b] != 0 && !in_tracked_word(layout, b))
                return false;
    }
    for (size_t j = 0; j < layout.storage_keys.size(); ++j)
        if (!covers(fact[layout.storage(h, j)], storage_value(s.storage, layout.storage_keys[j])))
            return false;
    if (const auto& summary = fact[layout.storage_summary(h)]; summary.is_const())
    {
        // Untracked keys include absent ones, which read as zero.
        if (summary.value() != 0)
            return false;
        for (const auto& [key, value] : s.storage)
            if (!layout.storage_index(key) && value != 0)
                return false;
    }
    return true;
}
}  // namespace

void CoverageReport::add(Violation v)
{
    ++violation_count;
    if (violations.size() < max_reported)
        violations.push_back(std::move(v));
}

void CoverageReport::merge(const CoverageReport& other)
{
    traces += other.traces;
    states += other.states;
    for (const auto& v : other.violations)
        if (violations.size() < max_reported)
            violations.push_back(v);
    violation_count += other.violation_count;
}

CoverageReport check_cfg(const pre::Cfg& cfg, std::span<const Trace> traces)
{
    CoverageReport report;
    for (size_t t = 0; t < traces.size(); ++t)
    {
        const auto& states = traces[t].states;
        ++report.traces;
        for (size_t i = 0; i < states.size(); ++i)
        {
            const auto& s = states[i];
            const auto h = static_cast<uint32_t>(s.stack.size());
            ++report.states;
            const auto heights = cfg.heights.find(s.pc);
            if (heights == cfg.heights.end() || !heights->second.contains(h))
            {
                report.add({t, i, s.pc, h, "height not recorded by the preanalysis"});
                continue;
            }
            if (const auto* abstract = cfg.state({s.pc, h}))
            {
                for (uint32_t k = 0; k < h; ++k)
                {
                    const auto& vs = (*abstract)[k];
                    const auto& vals = vs.values();
                    if (!vs.is_top() && !std::binary_search(vals.begin(), vals.end(), s.stack[k]))
                        report.add({t, i, s.pc, h, "slot " + std::to_string(k) + " outside value set " + vs.str()});
                }
            }
            for (uint32_t k = 0; k < h; ++k)
            {
                const auto c = cfg.const_map.find({s.pc, k});
                if (c != cfg.const_map.end())
                {
                    if (const auto v = c->second.singleton(); v && *v != s.stack[k])
                        report.add({t, i, s.pc, h, "propagated constant wrong in slot " + std::to_string(k)});
                }
            }
            if (i + 1 >= states.size())
                continue;
            const auto* ins = cfg.stream.at(s.pc);
            if (!ins || (ins->opcode != OP_JUMP && ins->opcode != OP_JUMPI))
                continue;
            const auto next = states[i + 1].pc;
            if (ins->opcode == OP_JUMPI && next == ins->next_pc())
                continue;
            const auto edges = cfg.jump_edges.find(s.pc);
            if (edges == cfg.jump_edges.end() || !edges->second.contains(next))
                report.add({t, i, s.pc, h, "jump to " + std::to_string(next) + " not a resolved edge"});
        }
    }
    return report;
}

CoverageReport check_traces(
    const abssem::ContractModel& model, const horn::LeastModel& facts, std::span<const Trace> traces)
{
    static const std::vector<std::vector<AbstractWord>> none;
    CoverageReport report;
    for (size_t t = 0; t < traces.size(); ++t)
    {
        ++report.traces;
        const auto& states = traces[t].states;
        for (size_t i = 0; i < states.size(); ++i)
        {
            const auto& s = states[i];
            const auto h = static_cast<uint32_t>(s.stack.size());
            ++report.states;
            const auto it = facts.facts.find(abssem::predicate_name(s.pc, h));
            const auto& candidates = it == facts.facts.end() ? none : it->second;
            const bool covered = std::any_of(candidates.begin(), candidates.end(),
                [&](const auto& fact) { return fact_covers(model.layout, fact, s); });
            if (!covered)
            {
                report.add({t, i, s.pc, h,
                    "no covering fact among " + std::to_string(candidates.size()) + " for " + describe(s)});
            }
        }
    }
    return report;
}

CoverageReport differential_check(
    const abssem::ContractModel& model, const horn::LeastModel& facts, std::span<const EnvScript> envs)
{
    std::vector<Trace> traces;
    traces.reserve(envs.size());
    for (const auto& env : envs)
        traces.push_back(exec_concrete(model.cfg.stream, env));
    auto report = check_cfg(model.cfg, traces);
    auto horn = check_traces(model, facts, traces);
    report.violation_count += horn.violation_count;
    for (auto& v : horn.violations)
        if (report.violations.size() < max_reported)
            report.violations.push_back(std::move(v));
    return report;
}

std::vector<EnvScript> exhaustive_calldata(size_t bytes, const EnvScript& base)
{
    std::vector<EnvScript> out;
    for (size_t mask = 0; mask < (size_t{1} << bytes); ++mask)
    {
        EnvScript env = base;
        env.calldata.assign(bytes, 0);
        for (size_t b = 0; b < bytes; ++b)
            env.calldata[b] = (mask >> b) & 1;
        out.push_back(std::move(env));
    }
    return out;
}

namespace
{
struct Item
{
    enum class Kind : uint8_t
    {
        Op,
        Push,
        PushLabel,
        Label,
    };
    Kind kind = Kind::Op;
    uint8_t op = OP_STOP;
    Word value = 0;
    uint8_t width = 1;
    size_t label = 0;
};

constexpr std::array<uint8_t, 16> binary_core{OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_MOD, OP_EXP, OP_LT, OP_GT, OP_SLT,
    OP_SGT, OP_EQ, OP_AND, OP_OR, OP_XOR, OP_SHL, OP_SHR};
constexpr std::array<uint8_t, 2> unary_core{OP_ISZERO, OP_NOT};
constexpr std::array<uint8_t, 4> memory_offsets{0x00, 0x20, 0x40, 0x05};

Word random_constant(std::mt19937_64& rng)
{
    switch (rng() % 6)
    {
    case 0:
        return Word{rng() % 4};
    case 1:
        return Word{rng() % 256};
    case 2:
        return ~Word{0} - Word{rng() % 3};
    case 3:
        return Word{1} << (rng() % 256);
    default:
    {
        Word w = 0;
        for (int i = 0; i < 4; ++i)
            w = (w << 64) | Word{rng()};
        return w >> (rng() % 256);
    }
    }
}

uint8_t push_width(const Word& w)
{
    uint8_t width = 1;
    while (width < 32 && (w >> (8 * width)) != 0)
        ++width;
    return width;
}
}  // namespace

GeneratedProgram generate_program(std::mt19937_64& rng, const GeneratorConfig& config)
{
    const size_t labels = rng() % 4;
    const size_t budget = 1 + rng() % config.max_instructions;
    std::vector<Item> items;
    std::vector<bool> placed(labels, false);
    size_t h = 0;
    auto op = [&](uint8_t o) { items.push_back({Item::Kind::Op, o}); };
    auto push = [&](Word w) { items.push_back({Item::Kind::Push, 0, w, push_width(w)}); };

    while (items.size() + 2 <= budget)
    {
        const auto choice = rng() % 100;
        if (choice < 18)
        {
            push(random_constant(rng));
            ++h;
        }
        else if (choice < 26 && h >= 1)
        {
            op(static_cast<uint8_t>(OP_DUP1 + rng() % std::min<size_t>(h, 4)));
            ++h;
        }
        else if (choice < 32 && h >= 2)
        {
            op(static_cast<uint8_t>(OP_SWAP1 + rng() % std::min<size_t>(h - 1, 3)));
        }
        else if (choice < 35 && h >= 1)
        {
            op(OP_POP);
            --h;
        }
        else if (choice < 55 && h >= 2)
        {
            op(binary_core[rng() % binary_core.size()]);
            --h;
        }
        else if (choice < 60 && h >= 1)
        {
            op(unary_core[rng() % unary_core.size()]);
        }
        else if (choice < 67 && config.calldata_bytes > 0)
        {
            push(Word{rng() % config.calldata_bytes});
            op(OP_CALLDATALOAD);
            ++h;
        }
        else if (choice < 71)
        {
            push(Word{memory_offsets[rng() % memory_offsets.size()]});
            op(OP_MLOAD);
            ++h;
        }
        else if (choice < 75 && h >= 1)
        {
            push(Word{memory_offsets[rng() % memory_offsets.size()]});
            op(OP_MSTORE);
            --h;
        }
        else if (choice < 79)
        {
            push(Word{rng() % 3});
            op(OP_SLOAD);
            ++h;
        }
        else if (choice < 83 && h >= 1)
        {
            push(Word{rng() % 3});
            op(OP_SSTORE);
            --h;
        }
        else if (choice < 88 && labels > 0)
        {
            const auto l = rng() % labels;
            items.push_back({Item::Kind::Label, OP_JUMPDEST, 0, 0, l});
            placed[l] = true;
        }
        else if (choice < 94 && labels > 0 && h >= 1)
        {
            items.push_back({Item::Kind::PushLabel, 0, 0, 2, rng() % labels});
            op(rng() % 3 == 0 ? OP_JUMP : OP_JUMPI);
            if (items.back().op == OP_JUMPI)
                --h;
        }
        else if (choice < 96)
        {
            op(rng() % 2 ? OP_CALLER : OP_PC);
            ++h;
        }
        else if (choice < 97)
        {
            op(OP_STOP);
        }
    }
    if (rng() % 2 && items.size() < budget)
        op(OP_STOP);

    // Lay out the code; labels never placed resolve to offset 0, an invalid target
    // unless the program starts with a JUMPDEST.
    std::vector<uint64_t> label_pc(labels, 0);
    uint64_t pc = 0;
    for (const auto& it : items)
    {
        if (it.kind == Item::Kind::Label)
            label_pc[it.label] = pc;
        pc += it.kind == Item::Kind::Push || it.kind == Item::Kind::PushLabel ? 1 + it.width : 1;
    }
    GeneratedProgram out;
    out.calldata_bytes = config.calldata_bytes;
    for (const auto& it : items)
    {
        switch (it.kind)
        {
        case Item::Kind::Op:
        case Item::Kind::Label:
            out.code.push_back(it.op);
            break;
        case Item::Kind::Push:
        case Item::Kind::PushLabel:
        {
            const Word value = it.kind == Item::Kind::Push ? it.value : Word{label_pc[it.label]};
            out.code.push_back(static_cast<uint8_t>(OP_PUSH1 + it.width - 1));
            const auto bytes = word_to_bytes(value);
            out.code.insert(out.code.end(), bytes.end() - it.width, bytes.end());
            break;
        }
        }
    }
    return out;
}

namespace
{
uint32_t body_height(const horn::Clause& c)
{
    return static_cast<uint32_t>(std::stoul(c.body->substr(c.body->rfind('_') + 1)));
}

/// Applies `fn` to every instruction rule of the given mnemonic.
void for_rules(abssem::ContractModel& model, std::string_view mnemonic,
    const std::function<void(horn::Clause&, uint32_t)>& fn)
{
    for (auto& c : model.system.clauses)
    {
        if (!c.body || !c.head)
            continue;
        const auto colon = c.label.find(':');
        if (colon == std::string::npos || c.label.substr(colon + 1) != mnemonic)
            continue;
        fn(c, body_height(c));
    }
}

Mutant rewrite_top(std::string name, std::string mnemonic, std::function<Term(const Term&)> f)
{
    return {std::move(name), [mnemonic, f](abssem::ContractModel& m) {
                for_rules(m, mnemonic, [&](horn::Clause& c, uint32_t) {
                    auto& top = c.head->args[StateLayout::stack(0)];
                    top = f(top);
                });
            }};
}
}  // namespace

const std::vector<Mutant>& seeded_mutants()
{
    static const std::vector<Mutant> mutants = [] {
        std::vector<Mutant> out;
        out.push_back(rewrite_top("add-result-plus-one", "ADD",
            [](const Term& t) { return Term::apply(OpKind::Add, {t, Term::literal(1)}); }));
        out.push_back(rewrite_top("sub-operands-swapped", "SUB", [](const Term& t) {
            if (!t.is_op())
                return t;
            return Term::apply(OpKind::Sub, {t.args[1], t.args[0]});
        }));
        out.push_back(rewrite_top("lt-computes-gt", "LT", [](const Term& t) {
            if (!t.is_op())
                return t;
            return Term::apply(OpKind::Gt, t.args);
        }));
        out.push_back(rewrite_top("iszero-inverted", "ISZERO",
            [](const Term& t) { return Term::apply(OpKind::IsZero, {t}); }));
        out.push_back({"push-immediate-off-by-one", [](abssem::ContractModel& m) {
                           for (auto& c : m.system.clauses)
                           {
                               if (!c.head || c.label.find(":PUSH") == std::string::npos)
                                   continue;
                               auto& top = c.head->args[StateLayout::stack(0)];
                               if (top.is_lit())
                                   top = Term::literal(top.lit + 1);
                           }
                       }});
        out.push_back({"swap1-ignored", [](abssem::ContractModel& m) {
                           for_rules(m, "SWAP1", [](horn::Clause& c, uint32_t) {
                               std::swap(c.head->args[StateLayout::stack(0)], c.head->args[StateLayout::stack(1)]);
                           });
                       }});
        // Entry storage is Top, so dropping a store entirely is an equivalent
        // mutant; clobbering every cell with zero is observable.
        out.push_back({"sstore-zeroes-storage", [](abssem::ContractModel& m) {
                           const auto& layout = m.layout;
                           for_rules(m, "SSTORE", [&](horn::Clause& c, uint32_t h) {
                               for (size_t j = 0; j <= layout.storage_keys.size(); ++j)
                                   c.head->args[layout.storage(h - 2, j)] = Term::literal(Word{0});
                           });
                       }});
        out.push_back({"mstore-dropped", [](abssem::ContractModel& m) {
                           const auto& layout = m.layout;
                           for_rules(m, "MSTORE", [&](horn::Clause& c, uint32_t h) {
                               for (size_t j = 0; j <= layout.memory_offsets.size(); ++j)
                                   c.head->args[layout.memory(h - 2, j)] = Term::variable(layout.memory(h, j));
                           });
                       }});
        return out;
    }();
    return mutants;
}

}  // namespace evmhorn::oracle
