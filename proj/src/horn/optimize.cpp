// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/horn/optimize.hpp"

#include <deque>
#include <map>
#include <set>

namespace evmhorn::horn
{
std::string_view to_string(Pass p) noexcept
{
    switch (p)
    {
    case Pass::ConstFold:
        return "const-fold";
    case Pass::PruneUnreachable:
        return "prune-unreachable-predicates";
    case Pass::InlineLinear:
        return "inline-linear-predicates";
    }
    return "?";
}

std::optional<Pass> parse_pass(std::string_view name) noexcept
{
    for (const auto p : {Pass::ConstFold, Pass::PruneUnreachable, Pass::InlineLinear})
        if (to_string(p) == name)
            return p;
    return std::nullopt;
}

const std::vector<Pass>& default_passes()
{
    static const std::vector<Pass> passes{Pass::ConstFold, Pass::PruneUnreachable, Pass::InlineLinear};
    return passes;
}

namespace
{
Term fold(const Term& t)
{
    if (!t.is_op())
        return t;
    std::vector<Term> args;
    args.reserve(t.args.size());
    bool all_lit = true;
    for (const auto& a : t.args)
    {
        auto f = fold(a);
        if (f.is_top())
            return Term::top();
        all_lit = all_lit && f.is_lit();
        args.push_back(std::move(f));
    }
    if (all_lit)
    {
        std::vector<Word> values;
        for (const auto& a : args)
            values.push_back(a.lit);
        return Term::literal(apply_op(t.op, values));
    }
    return Term::apply(t.op, std::move(args));
}

/// nullopt: the guard always holds.
std::optional<LinExpr> fold(const LinExpr& e)
{
    LinExpr out;
    out.constant = e.constant;
    for (const auto& [coeff, term] : e.parts)
    {
        auto f = fold(term);
        if (f.is_top())
            return std::nullopt;
        if (f.is_lit())
            out.constant += coeff * BigInt{f.lit};
        else
            out.parts.emplace_back(coeff, std::move(f));
    }
    return out;
}

enum class Truth
{
    Always,
    Never,
    Open,
};

Truth fold(const Guard& g, Guard& out)
{
    auto lhs = fold(g.lhs);
    auto rhs = fold(g.rhs);
    if (!lhs || !rhs)
        return Truth::Always;
    out = Guard{g.rel, std::move(*lhs), std::move(*rhs)};
    if (!out.lhs.parts.empty() || !out.rhs.parts.empty())
        return Truth::Open;
    return evaluate(out, {}) ? Truth::Always : Truth::Never;
}
}  // namespace

HornSystem const_fold(const HornSystem& system)
{
    HornSystem out;
    out.predicates = system.predicates;
    out.queries = system.queries;
    for (const auto& c : system.clauses)
    {
        Clause folded;
        folded.label = c.label;
        folded.body = c.body;
        folded.goal = c.goal;
        bool dead = false;
        for (const auto& g : c.guards)
        {
            Guard f;
            const auto truth = fold(g, f);
            if (truth == Truth::Never)
            {
                dead = true;
                break;
            }
            if (truth == Truth::Open)
                folded.guards.push_back(std::move(f));
        }
        if (dead)
            continue;
        if (c.head)
        {
            Atom head{c.head->pred, {}};
            for (const auto& t : c.head->args)
                head.args.push_back(fold(t));
            folded.head = std::move(head);
        }
        out.clauses.push_back(std::move(folded));
    }
    return out;
}

HornSystem prune_unreachable(const HornSystem& system)
{
    std::set<std::string> forward;
    std::deque<std::string> work;
    for (const auto& c : system.clauses)
        if (c.is_fact() && c.head && forward.insert(c.head->pred).second)
            work.push_back(c.head->pred);
    std::map<std::string, std::vector<const Clause*>> by_body;
    std::map<std::string, std::vector<const Clause*>> by_head;
    for (const auto& c : system.clauses)
    {
        if (c.body)
            by_body[*c.body].push_back(&c);
        if (c.head)
            by_head[c.head->pred].push_back(&c);
    }
    while (!work.empty())
    {
        const auto p = work.front();
        work.pop_front();
        for (const auto* c : by_body[p])
            if (c->head && forward.insert(c->head->pred).second)
                work.push_back(c->head->pred);
    }

    std::set<std::string> backward;
    for (const auto& c : system.clauses)
        if (c.is_goal() && c.body && forward.contains(*c.body) && backward.insert(*c.body).second)
            work.push_back(*c.body);
    while (!work.empty())
    {
        const auto p = work.front();
        work.pop_front();
        for (const auto* c : by_head[p])
            if (c->body && forward.contains(*c->body) && backward.insert(*c->body).second)
                work.push_back(*c->body);
    }

    HornSystem out;
    out.queries = system.queries;
    for (const auto& p : system.predicates)
        if (backward.contains(p.name))
            out.predicates.push_back(p);
    for (const auto& c : system.clauses)
    {
        if (c.body && !backward.contains(*c.body))
            continue;
        if (c.head && !backward.contains(c.head->pred))
            continue;
        out.clauses.push_back(c);
    }
    return out;
}

namespace
{
/// Composes producer `d` (head p) with consumer `c` (body p).
std::optional<Clause> compose(const Clause& d, const Clause& c, size_t max_term_size)
{
    const auto& with = d.head->args;
    Clause out;
    out.label = d.label + " > " + c.label;
    out.body = d.body;
    out.guards = d.guards;
    for (const auto& g : c.guards)
    {
        auto sg = substitute(g, with);
        for (const auto* side : {&sg.lhs, &sg.rhs})
            for (const auto& part : side->parts)
                if (part.second.size() > max_term_size || !encodable(part.second))
                    return std::nullopt;
        out.guards.push_back(std::move(sg));
    }
    if (c.head)
    {
        Atom head{c.head->pred, {}};
        for (const auto& t : c.head->args)
        {
            auto st = substitute(t, with);
            if (st.size() > max_term_size || !encodable(st))
                return std::nullopt;
            head.args.push_back(std::move(st));
        }
        out.head = std::move(head);
    }
    else
    {
        out.goal = c.goal;
    }
    return out;
}

bool inline_one(HornSystem& system, const InlineLimits& limits)
{
    std::map<std::string, std::vector<size_t>> consumers;
    std::map<std::string, std::vector<size_t>> producers;
    for (size_t i = 0; i < system.clauses.size(); ++i)
    {
        const auto& c = system.clauses[i];
        if (c.body)
            consumers[*c.body].push_back(i);
        if (c.head)
            producers[c.head->pred].push_back(i);
    }

    for (const auto& pred : system.predicates)
    {
        const auto& cons = consumers[pred.name];
        const auto& prods = producers[pred.name];
        if (cons.size() != 1 || prods.size() > limits.max_producers)
            continue;
        const auto& consumer = system.clauses[cons[0]];
        if (consumer.head && consumer.head->pred == pred.name)
            continue;

        std::vector<Clause> composed;
        bool ok = true;
        for (const auto i : prods)
        {
            auto c = compose(system.clauses[i], consumer, limits.max_term_size);
            if (!c)
            {
                ok = false;
                break;
            }
            composed.push_back(std::move(*c));
        }
        if (!ok)
            continue;

        const std::set<size_t> drop(prods.begin(), prods.end());
        std::vector<Clause> clauses;
        clauses.reserve(system.clauses.size() + composed.size());
        for (size_t i = 0; i < system.clauses.size(); ++i)
        {
            if (i == cons[0])
            {
                for (auto& c : composed)
                    clauses.push_back(std::move(c));
            }
            else if (!drop.contains(i))
            {
                clauses.push_back(std::move(system.clauses[i]));
            }
        }
        system.clauses = std::move(clauses);
        const auto name = pred.name;
        std::erase_if(system.predicates, [&](const Predicate& p) { return p.name == name; });
        return true;
    }
    return false;
}
}  // namespace

HornSystem inline_linear(const HornSystem& system, const InlineLimits& limits)
{
    HornSystem out = system;
    while (inline_one(out, limits))
    {
    }
    return out;
}

HornSystem optimize(const HornSystem& system, std::span<const Pass> passes)
{
    HornSystem out = system;
    for (const auto p : passes)
    {
        switch (p)
        {
        case Pass::ConstFold:
            out = const_fold(out);
            break;
        case Pass::PruneUnreachable:
            out = prune_unreachable(out);
            break;
        case Pass::InlineLinear:
            out = inline_linear(out);
            break;
        }
    }
    return out;
}

}  // namespace evmhorn::horn
