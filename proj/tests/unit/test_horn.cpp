// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "evmhorn/diagnostics.hpp"
#include "evmhorn/horn/external.hpp"
#include "evmhorn/horn/fixpoint.hpp"
#include "evmhorn/horn/optimize.hpp"
#include "evmhorn/horn/smtlib.hpp"
#include "evmhorn/horn/text.hpp"

using namespace evmhorn;
using namespace evmhorn::horn;

namespace
{
// P(0). P(x) /\ x < limit -> P(x + 1). Goal when x = target.
std::string counter_text(int limit, int target)
{
    return "evmhorn-ir 1\n"
           "pred P 1\n"
           "query q\n"
           "rule \"init\" true -> P(0x0)\n"
           "rule \"step\" P where x0 < " +
           std::to_string(limit) +
           " -> P(add(x0, 0x1))\n"
           "rule \"goal\" P where x0 = " +
           std::to_string(target) + " -> goal(q)\n";
}

Outcome outcome_of(const HornSystem& s, size_t widening = 16)
{
    return solve_internal(s, "q", widening).outcome;
}

Term random_term(std::mt19937_64& rng, uint32_t vars, int depth)
{
    std::uniform_int_distribution<int> pick(0, 9);
    const int k = pick(rng);
    if (depth == 0 || k < 4)
        return Term::variable(static_cast<uint32_t>(rng() % vars));
    if (k < 6)
        return Term::literal(Word{rng() % 300});
    if (k < 7)
        return Term::top();
    const auto op = static_cast<OpKind>(rng() % op_kind_count);
    std::vector<Term> args;
    for (size_t i = 0; i < op_arity(op); ++i)
        args.push_back(random_term(rng, vars, depth - 1));
    auto t = Term::apply(op, std::move(args));
    // Non-linear ops over variables are Top in translated systems too.
    return encodable(t) ? t : Term::top();
}

// A chain of predicates with random transfer terms and guards.
HornSystem random_system(std::mt19937_64& rng)
{
    HornSystem s;
    const uint32_t arity = 1 + static_cast<uint32_t>(rng() % 3);
    const size_t preds = 2 + rng() % 4;
    for (size_t i = 0; i < preds; ++i)
        s.predicates.push_back({"Q" + std::to_string(i), arity});
    s.add_query("q");
    Clause init{"init", std::nullopt, {}, Atom{"Q0", {}}, ""};
    for (uint32_t i = 0; i < arity; ++i)
        init.head->args.push_back(Term::literal(Word{rng() % 4}));
    s.clauses.push_back(init);
    for (size_t n = 0; n < preds * 2; ++n)
    {
        const size_t from = rng() % preds;
        const size_t to = rng() % preds;
        Clause c{std::to_string(n) + ":STEP", "Q" + std::to_string(from), {}, Atom{"Q" + std::to_string(to), {}}, ""};
        for (uint32_t i = 0; i < arity; ++i)
            c.head->args.push_back(random_term(rng, arity, 2));
        if (rng() % 2)
        {
            Guard g;
            g.rel = static_cast<Rel>(rng() % 6);
            g.lhs = LinExpr::of(Term::variable(static_cast<uint32_t>(rng() % arity)));
            g.rhs = LinExpr::number(BigInt{static_cast<int>(rng() % 6)});
            c.guards.push_back(g);
        }
        s.clauses.push_back(c);
    }
    Clause goal{"goal", "Q" + std::to_string(rng() % preds), {}, std::nullopt, "q"};
    Guard g;
    g.lhs = LinExpr::of(Term::variable(0));
    g.rhs = LinExpr::number(BigInt{static_cast<int>(rng() % 8)});
    goal.guards.push_back(g);
    s.clauses.push_back(goal);
    return s;
}
}  // namespace

TEST(HornTerm, EvaluatesWithTopPropagation)
{
    const std::vector<AbstractWord> vars{AbstractWord::constant(5), AbstractWord::top()};
    const auto add = Term::apply(OpKind::Add, {Term::variable(0), Term::literal(7)});
    EXPECT_EQ(evaluate(add, vars), AbstractWord::constant(12));
    const auto with_top = Term::apply(OpKind::Add, {Term::variable(1), Term::literal(7)});
    EXPECT_TRUE(evaluate(with_top, vars).is_top());
    const auto sub = Term::apply(OpKind::Sub, {Term::literal(3), Term::literal(5)});
    EXPECT_EQ(evaluate(sub, vars), AbstractWord::constant(Word{0} - 2));
}

TEST(HornTerm, GuardsAreConservativeOnTop)
{
    const std::vector<AbstractWord> vars{AbstractWord::top()};
    for (int r = 0; r < 6; ++r)
    {
        Guard g{static_cast<Rel>(r), LinExpr::of(Term::variable(0)), LinExpr::number(3)};
        EXPECT_TRUE(evaluate(g, vars)) << rel_symbol(g.rel);
    }
}

TEST(HornTerm, NegateIsAnInvolution)
{
    for (int r = 0; r < 6; ++r)
        EXPECT_EQ(negate(negate(static_cast<Rel>(r))), static_cast<Rel>(r));
    EXPECT_EQ(negate(Rel::Lt), Rel::Ge);
    EXPECT_EQ(negate(Rel::Eq), Rel::Ne);
}

TEST(HornText, ParsesAndRoundTripsCounter)
{
    const auto s = parse_horn_ir(counter_text(5, 5));
    ASSERT_EQ(s.predicates.size(), 1u);
    ASSERT_EQ(s.clauses.size(), 3u);
    EXPECT_TRUE(s.clauses[0].is_fact());
    EXPECT_TRUE(s.clauses[2].is_goal());
    EXPECT_EQ(parse_horn_ir(emit_horn_ir(s)), s);
}

TEST(HornText, ReportsLineOfErrors)
{
    try
    {
        parse_horn_ir("evmhorn-ir 1\npred P 1\nrule \"r\" true -> R(0x0)\n");
        FAIL() << "undeclared predicate accepted";
    }
    catch (const HornParseError& e)
    {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse_horn_ir("evmhorn-ir 1\npred P 1\nrule \"r\" true -> P(0x0, 0x1)\n"), HornParseError);
    EXPECT_THROW(parse_horn_ir("evmhorn-ir 1\npred P 1\nrule \"r\" true -> P(frob(0x0))\n"), HornParseError);
    EXPECT_THROW(parse_horn_ir("evmhorn-ir 2\n"), HornParseError);
}

TEST(HornText, RandomSystemsRoundTrip)
{
    std::mt19937_64 rng{7};
    for (int i = 0; i < 200; ++i)
    {
        const auto s = random_system(rng);
        const auto text = emit_horn_ir(s);
        EXPECT_EQ(parse_horn_ir(text), s) << text;
    }
}

TEST(HornFixpoint, BoundedCounterReachability)
{
    EXPECT_EQ(outcome_of(parse_horn_ir(counter_text(5, 5))), Outcome::QueryReachable);
    EXPECT_EQ(outcome_of(parse_horn_ir(counter_text(5, 6))), Outcome::QueryUnreachable);
    const auto model = compute_least_model(parse_horn_ir(counter_text(5, 6)));
    EXPECT_EQ(model.facts.at("P").size(), 6u);
    EXPECT_EQ(model.widened_positions, 0u);
}

TEST(HornFixpoint, WideningTerminatesWithinBound)
{
    const auto s = parse_horn_ir(counter_text(1000000, 999999));
    FixpointOptions options;
    options.widening = 4;
    const auto model = compute_least_model(s, options);
    EXPECT_GT(model.widened_positions, 0u);
    EXPECT_LE(BigInt{model.stored}, model.fact_bound);
    ASSERT_FALSE(model.facts.at("P").empty());
    // Once widened, the Top fact subsumes the rest and reaches the goal.
    EXPECT_EQ(outcome_of(s, 4), Outcome::QueryReachable);
}

TEST(HornFixpoint, WitnessReplaysAndTamperingIsCaught)
{
    const auto s = parse_horn_ir(counter_text(5, 3));
    const auto v = solve_internal(s, "q");
    ASSERT_EQ(v.outcome, Outcome::QueryReachable);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->front().label, "init");
    EXPECT_EQ(v.witness->back().label, "goal");
    EXPECT_EQ(replay_witness(s, *v.witness), std::nullopt);

    auto tampered = *v.witness;
    tampered[1].args[0] = AbstractWord::constant(42);
    EXPECT_NE(replay_witness(s, tampered), std::nullopt);
}

TEST(HornFixpoint, RandomWitnessesReplay)
{
    std::mt19937_64 rng{11};
    size_t reachable = 0;
    for (int i = 0; i < 300; ++i)
    {
        const auto s = random_system(rng);
        const auto v = solve_internal(s, "q", 4);
        if (v.outcome != Outcome::QueryReachable)
            continue;
        ++reachable;
        ASSERT_TRUE(v.witness);
        EXPECT_EQ(replay_witness(s, *v.witness), std::nullopt) << emit_horn_ir(s);
    }
    EXPECT_GT(reachable, 20u);
}

TEST(HornOptimize, PassNamesRoundTrip)
{
    for (const auto p : default_passes())
        EXPECT_EQ(parse_pass(to_string(p)), p);
    EXPECT_EQ(parse_pass("bogus"), std::nullopt);
}

TEST(HornOptimize, ConstFoldFoldsLiterals)
{
    const auto s = parse_horn_ir("evmhorn-ir 1\npred P 1\nquery q\n"
                                 "rule \"i\" true -> P(add(0x2, mul(0x3, 0x4)))\n"
                                 "rule \"g\" P where x0 = 14 -> goal(q)\n");
    const auto folded = const_fold(s);
    EXPECT_EQ(folded.clauses[0].head->args[0], Term::literal(14));
}

TEST(HornOptimize, PruneDropsUnreachablePredicates)
{
    const auto s = parse_horn_ir("evmhorn-ir 1\npred P 1\npred R 1\nquery q\n"
                                 "rule \"i\" true -> P(0x0)\n"
                                 "rule \"dead\" R -> P(x0)\n"
                                 "rule \"g\" R -> goal(q)\n");
    // R has no facts and P leads to no goal, so nothing survives.
    const auto pruned = prune_unreachable(s);
    EXPECT_EQ(pruned.find_predicate("R"), nullptr);
    EXPECT_TRUE(pruned.clauses.empty());
    EXPECT_EQ(outcome_of(pruned), Outcome::QueryUnreachable);
}

TEST(HornOptimize, InlineJoinsLabels)
{
    const auto s = parse_horn_ir("evmhorn-ir 1\npred P 1\npred R 1\nquery q\n"
                                 "rule \"1:A\" true -> P(0x1)\n"
                                 "rule \"2:B\" P -> R(add(x0, 0x1))\n"
                                 "rule \"3:C\" R where x0 = 2 -> goal(q)\n");
    const auto inlined = inline_linear(s);
    EXPECT_LT(inlined.predicates.size(), s.predicates.size());
    bool joined = false;
    for (const auto& c : inlined.clauses)
        joined = joined || c.label.find(" > ") != std::string::npos;
    EXPECT_TRUE(joined);
    EXPECT_EQ(outcome_of(inlined), Outcome::QueryReachable);
}

TEST(HornOptimize, EveryPassCombinationPreservesOutcome)
{
    std::mt19937_64 rng{13};
    const auto& all = default_passes();
    for (int i = 0; i < 150; ++i)
    {
        const auto s = random_system(rng);
        const auto base = outcome_of(s, 4);
        for (unsigned mask = 1; mask < 8; ++mask)
        {
            std::vector<Pass> passes;
            for (size_t b = 0; b < all.size(); ++b)
                if (mask & (1u << b))
                    passes.push_back(all[b]);
            const auto optimized = optimize(s, passes);
            EXPECT_NO_THROW(validate(optimized));
            // Optimizations may only make a widened result more precise.
            const auto got = outcome_of(optimized, 4);
            if (base == Outcome::QueryUnreachable)
            {
                EXPECT_EQ(got, Outcome::QueryUnreachable) << "mask " << mask << "\n" << emit_horn_ir(s);
            }
        }
    }
}

TEST(HornSmt, EncodesHornLogic)
{
    const auto s = parse_horn_ir(counter_text(5, 5));
    const auto text = emit_chc_smtlib(s, "q");
    EXPECT_NE(text.find("(set-logic HORN)"), std::string::npos);
    EXPECT_NE(text.find("(declare-fun P"), std::string::npos);
    EXPECT_NE(text.find("(check-sat)"), std::string::npos);
    EXPECT_EQ(text, emit_chc_smtlib(s, "q"));
}

TEST(HornExternal, MapsAnswers)
{
    EXPECT_EQ(map_solver_answer("sat\n"), Outcome::QueryUnreachable);
    EXPECT_EQ(map_solver_answer("unsat\n"), Outcome::QueryReachable);
    EXPECT_EQ(map_solver_answer("unknown\n"), Outcome::Unknown);
    EXPECT_EQ(map_solver_answer("(error \"x\")\n"), Outcome::Unknown);
}

TEST(HornExternal, SplitsCommandLine)
{
    const auto c = parse_solver_command("z3 -T:5 fp.engine=spacer");
    EXPECT_EQ(c.program, "z3");
    EXPECT_EQ(c.args, (std::vector<std::string>{"-T:5", "fp.engine=spacer"}));
}

TEST(HornExternal, MissingSolverThrows)
{
    EXPECT_THROW(solve_external(emit_chc_smtlib(parse_horn_ir(counter_text(5, 5)), "q"),
                     {"/nonexistent/solver", {}}, std::chrono::seconds{5}),
        ConfigError);
}

TEST(HornExternal, AgreesWithInternalEngine)
{
    const std::string z3{EVMHORN_Z3};
    if (z3.empty() || !std::filesystem::exists(z3))
        GTEST_SKIP() << "no z3 binary";
    std::mt19937_64 rng{17};
    for (int i = 0; i < 40; ++i)
    {
        const auto s = random_system(rng);
        const auto internal = outcome_of(s, 4);
        const auto external = solve_external(emit_chc_smtlib(s, "q"), {z3, {}}, std::chrono::seconds{30});
        if (internal == Outcome::QueryUnreachable)
        {
            EXPECT_NE(external.outcome, Outcome::QueryReachable) << emit_horn_ir(s);
        }
    }
    EXPECT_EQ(solve_external(emit_chc_smtlib(parse_horn_ir(counter_text(5, 5)), "q"), {z3, {}}).outcome,
        Outcome::QueryReachable);
    EXPECT_EQ(solve_external(emit_chc_smtlib(parse_horn_ir(counter_text(5, 6)), "q"), {z3, {}}).outcome,
        Outcome::QueryUnreachable);
}
