// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evmhorn/word.hpp"
#include "evmhorn/word_ops.hpp"

namespace evmhorn::horn
{
/// Clause terms over abstract words. Variables refer to the body atom's
/// arguments by position (x0, x1, ...).
struct Term
{
    enum class Kind : uint8_t
    {
        Var,
        Lit,
        Top,
        Op,
    };

    Kind kind = Kind::Top;
    uint32_t var = 0;
    Word lit = 0;
    OpKind op = OpKind::Add;
    std::vector<Term> args;

    static Term variable(uint32_t index);
    static Term literal(Word value);
    static Term top();
    static Term apply(OpKind op, std::vector<Term> args);

    bool is_var() const noexcept { return kind == Kind::Var; }
    bool is_lit() const noexcept { return kind == Kind::Lit; }
    bool is_top() const noexcept { return kind == Kind::Top; }
    bool is_op() const noexcept { return kind == Kind::Op; }

    size_t size() const noexcept;

    bool operator==(const Term&) const = default;
};

enum class Rel : uint8_t
{
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
};

std::string_view rel_symbol(Rel r) noexcept;
Rel negate(Rel r) noexcept;

/// Σ coeff·term + constant over unbounded integers.
struct LinExpr
{
    std::vector<std::pair<BigInt, Term>> parts;
    BigInt constant = 0;

    static LinExpr of(Term t);
    static LinExpr number(BigInt c);

    bool operator==(const LinExpr&) const = default;
};

/// lhs rel rhs. A part whose term evaluates to Top makes the guard hold, so
/// guards never restrict a Top value.
struct Guard
{
    Rel rel = Rel::Eq;
    LinExpr lhs;
    LinExpr rhs;

    bool operator==(const Guard&) const = default;
};

struct Atom
{
    std::string pred;
    std::vector<Term> args;

    bool operator==(const Atom&) const = default;
};

/// Linear clause: at most one body atom. The body atom's arguments are the
/// variables x0..x(n-1); the head is either a predicate atom or a goal.
struct Clause
{
    std::string label;
    std::optional<std::string> body;
    std::vector<Guard> guards;
    std::optional<Atom> head;
    std::string goal;

    bool is_goal() const noexcept { return !head.has_value(); }
    bool is_fact() const noexcept { return !body.has_value(); }

    bool operator==(const Clause&) const = default;
};

struct Predicate
{
    std::string name;
    uint32_t arity = 0;

    bool operator==(const Predicate&) const = default;
};

struct HornSystem
{
    std::vector<Predicate> predicates;
    std::vector<std::string> queries;
    std::vector<Clause> clauses;

    const Predicate* find_predicate(std::string_view name) const;
    bool has_query(std::string_view name) const;
    void add_query(std::string name);

    bool operator==(const HornSystem&) const = default;
};

/// Whether the SMT-LIB backend can encode the term in linear arithmetic.
/// Literal-only operations are always encodable; otherwise add, sub, the
/// comparisons, iszero and not are; mul needs one literal factor; div, mod
/// need a literal divisor; byte, shl, shr, sar need a literal first operand;
/// and needs a literal 2^k - 1 mask; everything else needs all literals.
bool encodable(const Term& t);

/// Throws std::invalid_argument describing the first problem: undeclared or
/// duplicate predicate, wrong arity, variable out of range, variables in a
/// fact, non-encodable term, or a goal naming an undeclared query.
void validate(const HornSystem& system);

/// Term evaluation over abstract words: Top absorbs every operation.
AbstractWord evaluate(const Term& t, std::span<const AbstractWord> vars);

/// Guard evaluation with the Top-passes rule.
bool evaluate(const Guard& g, std::span<const AbstractWord> vars);

/// Replaces every variable by the corresponding term.
Term substitute(const Term& t, std::span<const Term> with);
LinExpr substitute(const LinExpr& e, std::span<const Term> with);
Guard substitute(const Guard& g, std::span<const Term> with);

struct SystemStats
{
    size_t predicates = 0;
    size_t clauses = 0;
    size_t facts = 0;
    size_t goals = 0;
};

SystemStats stats(const HornSystem& system);

}  // namespace evmhorn::horn
