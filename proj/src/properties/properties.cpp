// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/properties/properties.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace evmhorn::properties
{
using abssem::StateLayout;
using horn::Clause;
using horn::Guard;
using horn::LinExpr;
using horn::Rel;
using horn::Term;

std::string_view to_string(PropertyKind k) noexcept
{
    switch (k)
    {
    case PropertyKind::SingleEntrancy:
        return "single-entrancy";
    case PropertyKind::StoreAfterCall:
        return "store-after-call";
    case PropertyKind::Assertion:
        return "assertion";
    }
    return "?";
}

std::optional<PropertyKind> parse_property(std::string_view name) noexcept
{
    for (const auto k : {PropertyKind::SingleEntrancy, PropertyKind::StoreAfterCall, PropertyKind::Assertion})
        if (to_string(k) == name)
            return k;
    return std::nullopt;
}

std::string_view to_string(Verdict v) noexcept
{
    switch (v)
    {
    case Verdict::Secure:
        return "secure";
    case Verdict::Insecure:
        return "insecure";
    case Verdict::Unknown:
        return "unknown";
    }
    return "?";
}

namespace
{
class AssertionParser
{
public:
    AssertionParser(std::string_view s, size_t line) : s_{s}, line_{line} {}

    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("assertion line " + std::to_string(line_) + ": " + what);
    }

    void ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(std::string_view tok)
    {
        ws();
        if (s_.substr(pos_, tok.size()) != tok)
            return false;
        pos_ += tok.size();
        return true;
    }

    bool at_end()
    {
        ws();
        return pos_ >= s_.size();
    }

    std::string_view token(auto pred)
    {
        ws();
        const size_t start = pos_;
        while (pos_ < s_.size() && pred(s_[pos_]))
            ++pos_;
        return s_.substr(start, pos_ - start);
    }

    BigInt integer()
    {
        const auto t = token([](char c) { return std::isxdigit(static_cast<unsigned char>(c)) || c == 'x'; });
        if (t.empty())
            fail("expected number");
        try
        {
            return BigInt{parse_word(t)};
        }
        catch (const std::invalid_argument&)
        {
            fail("bad number '" + std::string{t} + "'");
        }
    }

    StatePart part()
    {
        ws();
        StatePart p;
        if (accept("storage["))
        {
            const auto t = token([](char c) { return c != ']'; });
            if (!accept("]"))
                fail("expected ']'");
            try
            {
                p.kind = StatePart::Kind::Storage;
                p.key = parse_word(t);
            }
            catch (const std::invalid_argument&)
            {
                fail("bad storage key '" + std::string{t} + "'");
            }
            return p;
        }
        if (accept("s"))
        {
            const auto t = token([](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
            if (t.empty())
                fail("expected stack slot number");
            p.kind = StatePart::Kind::Stack;
            p.slot = static_cast<uint32_t>(std::stoul(std::string{t}));
            if (p.slot > 15)
                fail("stack slots are s0..s15");
            return p;
        }
        fail("expected s<i> or storage[<key>]");
    }

    bool at_digit()
    {
        ws();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }

    AssertionSide side()
    {
        AssertionSide out;
        bool first = true;
        for (;;)
        {
            BigInt sign = 1;
            if (accept("-"))
                sign = -1;
            else if (!first && !accept("+"))
                break;
            first = false;
            if (at_digit())
            {
                const auto n = integer();
                if (accept("*"))
                    out.terms.push_back({sign * n, part()});
                else
                    out.constant += sign * n;
            }
            else
            {
                out.terms.push_back({sign, part()});
            }
        }
        return out;
    }

    Rel rel()
    {
        if (accept("!="))
            return Rel::Ne;
        if (accept("<="))
            return Rel::Le;
        if (accept(">="))
            return Rel::Ge;
        if (accept("=="))
            return Rel::Eq;
        if (accept("="))
            return Rel::Eq;
        if (accept("<"))
            return Rel::Lt;
        if (accept(">"))
            return Rel::Gt;
        fail("expected relation");
    }

    size_t pos_ = 0;

private:
    std::string_view s_;
    size_t line_;
};
}  // namespace

std::vector<Assertion> parse_assertions(std::string_view text)
{
    std::vector<Assertion> out;
    std::istringstream lines{std::string{text}};
    std::string raw;
    size_t line_no = 0;
    while (std::getline(lines, raw))
    {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.resize(hash);
        AssertionParser p{raw, line_no};
        if (p.at_end())
            continue;
        Assertion a;
        a.line = line_no;
        if (!p.accept("pc"))
            p.fail("expected 'pc'");
        a.pc = static_cast<uint64_t>(p.integer());
        if (!p.accept("assert"))
            p.fail("expected 'assert'");
        a.lhs = p.side();
        a.rel = p.rel();
        a.rhs = p.side();
        if (!p.at_end())
            p.fail("trailing text");
        out.push_back(std::move(a));
    }
    return out;
}

namespace
{
std::string site_label(const abssem::ContractModel& model, pre::StateKey key, std::string_view suffix)
{
    const auto* ins = model.cfg.stream.at(key.pc);
    const std::string name = ins ? std::string{model.cfg.stream.info(*ins).name} : "STOP";
    return std::to_string(key.pc) + ":" + name + ":" + std::string{suffix};
}

Clause goal_clause(std::string label, pre::StateKey key, std::vector<Guard> guards, const std::string& query)
{
    Clause c;
    c.label = std::move(label);
    c.body = abssem::predicate_name(key.pc, key.height);
    c.guards = std::move(guards);
    c.goal = query;
    return c;
}

Guard var_equals(uint32_t var, uint64_t value)
{
    return Guard{Rel::Eq, LinExpr::of(Term::variable(var)), LinExpr::number(value)};
}
}  // namespace

std::string single_entrancy_query(abssem::ContractModel& model, const PropertySpec& spec)
{
    const std::string name{single_entrancy_query_name};
    model.system.add_query(name);
    for (const auto& site : model.sites)
    {
        bool counts = evm::is_call_class(site.opcode);
        if (site.opcode == evm::OP_STATICCALL)
            counts = spec.count_staticcall;
        if (site.opcode == evm::OP_SELFDESTRUCT)
            counts = spec.count_selfdestruct;
        if (!counts)
            continue;
        model.system.clauses.push_back(goal_clause(site_label(model, site.key, "goal"), site.key,
            {var_equals(StateLayout::mode, abssem::mode_reenter)}, name));
    }
    return name;
}

std::string store_after_call_query(abssem::ContractModel& model)
{
    const std::string name{store_after_call_query_name};
    model.system.add_query(name);
    for (const auto& site : model.sites)
    {
        if (site.opcode != evm::OP_SSTORE && !evm::runs_in_caller_storage(site.opcode))
            continue;
        model.system.clauses.push_back(
            goal_clause(site_label(model, site.key, "goal"), site.key, {var_equals(StateLayout::called, 1)}, name));
    }
    return name;
}

std::string assertion_query(
    abssem::ContractModel& model, const PropertySpec& spec, std::vector<Diagnostic>& diagnostics)
{
    const std::string name{assertion_query_name};
    model.system.add_query(name);
    for (const auto& a : spec.assertions)
    {
        const auto& heights = model.cfg.heights;
        const auto it = heights.find(a.pc);
        if (it == heights.end())
        {
            diagnostics.push_back({DiagnosticKind::UnreachableTarget, a.pc,
                "assertion on line " + std::to_string(a.line) + " targets an unreachable pc; holds vacuously"});
            continue;
        }
        for (const auto h : it->second)
        {
            auto convert = [&](const AssertionSide& side) {
                LinExpr e;
                e.constant = side.constant;
                for (const auto& t : side.terms)
                {
                    uint32_t var = 0;
                    if (t.part.kind == StatePart::Kind::Stack)
                    {
                        if (t.part.slot >= h)
                        {
                            throw std::invalid_argument("assertion line " + std::to_string(a.line) + ": s" +
                                                        std::to_string(t.part.slot) + " is not on the stack at pc " +
                                                        std::to_string(a.pc) + " (height " + std::to_string(h) + ")");
                        }
                        var = StateLayout::stack(t.part.slot);
                    }
                    else
                    {
                        const auto j = model.layout.storage_index(t.part.key);
                        if (!j)
                        {
                            throw std::invalid_argument("assertion line " + std::to_string(a.line) + ": storage[" +
                                                        to_hex(t.part.key) + "] is not a tracked storage cell");
                        }
                        var = model.layout.storage(h, *j);
                    }
                    e.parts.emplace_back(t.coeff, Term::variable(var));
                }
                return e;
            };
            Guard violated{horn::negate(a.rel), convert(a.lhs), convert(a.rhs)};
            model.system.clauses.push_back(goal_clause(
                std::to_string(a.pc) + ":assert@" + std::to_string(a.line), {a.pc, h}, {std::move(violated)}, name));
        }
    }
    return name;
}

std::string add_query(abssem::ContractModel& model, const PropertySpec& spec, std::vector<Diagnostic>& diagnostics)
{
    switch (spec.kind)
    {
    case PropertyKind::SingleEntrancy:
        return single_entrancy_query(model, spec);
    case PropertyKind::StoreAfterCall:
        return store_after_call_query(model);
    case PropertyKind::Assertion:
        return assertion_query(model, spec, diagnostics);
    }
    throw std::invalid_argument("unknown property");
}

AnalysisVerdict interpret_verdict(horn::SolverVerdict sv, PropertyKind property)
{
    AnalysisVerdict v;
    v.property = property;
    v.engine = sv.solver;
    switch (sv.outcome)
    {
    case horn::Outcome::QueryUnreachable:
        v.verdict = Verdict::Secure;
        break;
    case horn::Outcome::QueryReachable:
        v.verdict = Verdict::Insecure;
        break;
    case horn::Outcome::Unknown:
        v.verdict = Verdict::Unknown;
        break;
    }
    v.solver = std::move(sv);
    return v;
}

}  // namespace evmhorn::properties
