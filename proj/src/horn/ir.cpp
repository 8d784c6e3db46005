// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/horn/ir.hpp"

#include <set>
#include <stdexcept>

namespace evmhorn::horn
{
Term Term::variable(uint32_t index)
{
    Term t;
    t.kind = Kind::Var;
    t.var = index;
    return t;
}

Term Term::literal(Word value)
{
    Term t;
    t.kind = Kind::Lit;
    t.lit = std::move(value);
    return t;
}

Term Term::top()
{
    return Term{};
}

Term Term::apply(OpKind op, std::vector<Term> args)
{
    if (args.size() != op_arity(op))
        throw std::invalid_argument("wrong operand count for " + std::string{op_name(op)});
    Term t;
    t.kind = Kind::Op;
    t.op = op;
    t.args = std::move(args);
    return t;
}

size_t Term::size() const noexcept
{
    size_t n = 1;
    for (const auto& a : args)
        n += a.size();
    return n;
}

std::string_view rel_symbol(Rel r) noexcept
{
    switch (r)
    {
    case Rel::Eq:
        return "=";
    case Rel::Ne:
        return "!=";
    case Rel::Lt:
        return "<";
    case Rel::Le:
        return "<=";
    case Rel::Gt:
        return ">";
    case Rel::Ge:
        return ">=";
    }
    return "?";
}

Rel negate(Rel r) noexcept
{
    switch (r)
    {
    case Rel::Eq:
        return Rel::Ne;
    case Rel::Ne:
        return Rel::Eq;
    case Rel::Lt:
        return Rel::Ge;
    case Rel::Le:
        return Rel::Gt;
    case Rel::Gt:
        return Rel::Le;
    case Rel::Ge:
        return Rel::Lt;
    }
    return r;
}

LinExpr LinExpr::of(Term t)
{
    LinExpr e;
    e.parts.emplace_back(1, std::move(t));
    return e;
}

LinExpr LinExpr::number(BigInt c)
{
    LinExpr e;
    e.constant = std::move(c);
    return e;
}

const Predicate* HornSystem::find_predicate(std::string_view name) const
{
    for (const auto& p : predicates)
        if (p.name == name)
            return &p;
    return nullptr;
}

bool HornSystem::has_query(std::string_view name) const
{
    for (const auto& q : queries)
        if (q == name)
            return true;
    return false;
}

void HornSystem::add_query(std::string name)
{
    if (!has_query(name))
        queries.push_back(std::move(name));
}

namespace
{
bool is_low_mask(const Word& w)
{
    // 2^k - 1 has no zero bit below its highest set bit.
    return (w & (w + 1)) == 0;
}
}  // namespace

bool encodable(const Term& t)
{
    if (!t.is_op())
        return true;
    for (const auto& a : t.args)
        if (!encodable(a))
            return false;

    bool all_lit = true;
    for (const auto& a : t.args)
        all_lit = all_lit && a.is_lit();
    if (all_lit)
        return true;

    switch (t.op)
    {
    case OpKind::Add:
    case OpKind::Sub:
    case OpKind::Lt:
    case OpKind::Gt:
    case OpKind::Slt:
    case OpKind::Sgt:
    case OpKind::Eq:
    case OpKind::IsZero:
    case OpKind::Not:
        return true;
    case OpKind::Mul:
        return t.args[0].is_lit() || t.args[1].is_lit();
    case OpKind::Div:
    case OpKind::Mod:
        return t.args[1].is_lit();
    case OpKind::Byte:
    case OpKind::Shl:
    case OpKind::Shr:
    case OpKind::Sar:
        return t.args[0].is_lit();
    case OpKind::And:
        return (t.args[0].is_lit() && is_low_mask(t.args[0].lit)) ||
               (t.args[1].is_lit() && is_low_mask(t.args[1].lit));
    default:
        return false;
    }
}

namespace
{
void check_term(const Term& t, uint32_t nvars, const std::string& where)
{
    switch (t.kind)
    {
    case Term::Kind::Var:
        if (t.var >= nvars)
            throw std::invalid_argument(where + ": variable x" + std::to_string(t.var) + " out of range");
        break;
    case Term::Kind::Op:
        if (t.args.size() != op_arity(t.op))
            throw std::invalid_argument(where + ": wrong operand count");
        for (const auto& a : t.args)
            check_term(a, nvars, where);
        break;
    default:
        break;
    }
}
}  // namespace

void validate(const HornSystem& system)
{
    std::map<std::string, uint32_t> arity;
    for (const auto& p : system.predicates)
        if (!arity.emplace(p.name, p.arity).second)
            throw std::invalid_argument("duplicate predicate " + p.name);
    std::set<std::string> queries(system.queries.begin(), system.queries.end());
    if (queries.size() != system.queries.size())
        throw std::invalid_argument("duplicate query");

    for (size_t i = 0; i < system.clauses.size(); ++i)
    {
        const auto& c = system.clauses[i];
        const std::string where = "clause " + std::to_string(i) + " \"" + c.label + "\"";
        uint32_t nvars = 0;
        if (c.body)
        {
            const auto it = arity.find(*c.body);
            if (it == arity.end())
                throw std::invalid_argument(where + ": undeclared predicate " + *c.body);
            nvars = it->second;
        }
        auto check = [&](const Term& t) {
            check_term(t, nvars, where);
            if (!encodable(t))
                throw std::invalid_argument(where + ": term not encodable in linear arithmetic");
        };
        for (const auto& g : c.guards)
        {
            for (const auto* side : {&g.lhs, &g.rhs})
                for (const auto& [coeff, term] : side->parts)
                    check(term);
        }
        if (c.head)
        {
            const auto it = arity.find(c.head->pred);
            if (it == arity.end())
                throw std::invalid_argument(where + ": undeclared predicate " + c.head->pred);
            if (it->second != c.head->args.size())
                throw std::invalid_argument(where + ": arity mismatch for " + c.head->pred);
            for (const auto& t : c.head->args)
                check(t);
        }
        else if (!queries.contains(c.goal))
        {
            throw std::invalid_argument(where + ": undeclared query " + c.goal);
        }
    }
}

AbstractWord evaluate(const Term& t, std::span<const AbstractWord> vars)
{
    switch (t.kind)
    {
    case Term::Kind::Var:
        return vars[t.var];
    case Term::Kind::Lit:
        return AbstractWord::constant(t.lit);
    case Term::Kind::Top:
        return AbstractWord::top();
    case Term::Kind::Op:
        break;
    }
    std::vector<Word> operands;
    operands.reserve(t.args.size());
    for (const auto& a : t.args)
    {
        const auto v = evaluate(a, vars);
        if (v.is_top())
            return AbstractWord::top();
        operands.push_back(v.value());
    }
    return AbstractWord::constant(apply_op(t.op, operands));
}

namespace
{
std::optional<BigInt> evaluate(const LinExpr& e, std::span<const AbstractWord> vars)
{
    BigInt sum = e.constant;
    for (const auto& [coeff, term] : e.parts)
    {
        const auto v = evaluate(term, vars);
        if (v.is_top())
            return std::nullopt;
        sum += coeff * BigInt{v.value()};
    }
    return sum;
}
}  // namespace

bool evaluate(const Guard& g, std::span<const AbstractWord> vars)
{
    const auto l = evaluate(g.lhs, vars);
    const auto r = evaluate(g.rhs, vars);
    if (!l || !r)
        return true;
    switch (g.rel)
    {
    case Rel::Eq:
        return *l == *r;
    case Rel::Ne:
        return *l != *r;
    case Rel::Lt:
        return *l < *r;
    case Rel::Le:
        return *l <= *r;
    case Rel::Gt:
        return *l > *r;
    case Rel::Ge:
        return *l >= *r;
    }
    return true;
}

Term substitute(const Term& t, std::span<const Term> with)
{
    switch (t.kind)
    {
    case Term::Kind::Var:
        return with[t.var];
    case Term::Kind::Op:
    {
        Term out = t;
        for (auto& a : out.args)
            a = substitute(a, with);
        return out;
    }
    default:
        return t;
    }
}

LinExpr substitute(const LinExpr& e, std::span<const Term> with)
{
    LinExpr out = e;
    for (auto& part : out.parts)
        part.second = substitute(part.second, with);
    return out;
}

Guard substitute(const Guard& g, std::span<const Term> with)
{
    return Guard{g.rel, substitute(g.lhs, with), substitute(g.rhs, with)};
}

SystemStats stats(const HornSystem& system)
{
    SystemStats s;
    s.predicates = system.predicates.size();
    s.clauses = system.clauses.size();
    for (const auto& c : system.clauses)
    {
        s.facts += c.is_fact() ? 1 : 0;
        s.goals += c.is_goal() ? 1 : 0;
    }
    return s;
}

}  // namespace evmhorn::horn
