// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/horn/fixpoint.hpp"

#include <chrono>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace evmhorn::horn
{
std::string_view to_string(Outcome o) noexcept
{
    switch (o)
    {
    case Outcome::QueryUnreachable:
        return "QueryUnreachable";
    case Outcome::QueryReachable:
        return "QueryReachable";
    case Outcome::Unknown:
        return "Unknown";
    }
    return "?";
}

namespace
{
constexpr int64_t no_clause = -1;
constexpr int64_t widen_step = -2;

struct FactRecord
{
    uint32_t pred;
    std::vector<AbstractWord> args;
    int64_t parent;
    int64_t clause;
    bool dead = false;
};

struct PredState
{
    std::string name;
    uint32_t arity = 0;
    std::unordered_map<std::vector<AbstractWord>, size_t, AbstractTupleHash> index;
    std::vector<std::set<Word>> seen;
    std::vector<bool> widened;
    std::vector<size_t> facts;
    std::vector<size_t> consumers;
};

class Engine
{
public:
    Engine(const HornSystem& system, const FixpointOptions& options) : system_{system}, options_{options}
    {
        if (options.widening == 0)
            throw std::invalid_argument("widening threshold must be positive");
        for (const auto& p : system.predicates)
        {
            PredState s;
            s.name = p.name;
            s.arity = p.arity;
            s.seen.resize(p.arity);
            s.widened.assign(p.arity, false);
            pred_index_.emplace(p.name, static_cast<uint32_t>(preds_.size()));
            preds_.push_back(std::move(s));
        }
        for (size_t i = 0; i < system.clauses.size(); ++i)
        {
            const auto& c = system.clauses[i];
            if (c.body)
                preds_[lookup(*c.body)].consumers.push_back(i);
        }
    }

    LeastModel run()
    {
        for (size_t i = 0; i < system_.clauses.size() && !stopped_; ++i)
        {
            const auto& c = system_.clauses[i];
            if (c.is_fact())
                fire(i, no_clause, {});
        }
        while (!work_.empty() && !stopped_)
        {
            const auto id = work_.front();
            work_.pop_front();
            if (facts_[id].dead)
                continue;
            const auto pred = facts_[id].pred;
            for (const auto ci : preds_[pred].consumers)
            {
                // Copy: insertion may reallocate facts_.
                const auto args = facts_[id].args;
                fire(ci, static_cast<int64_t>(id), args);
                if (stopped_ || facts_[id].dead)
                    break;
            }
        }

        LeastModel model;
        for (const auto& p : preds_)
        {
            auto& out = model.facts[p.name];
            for (const auto id : p.facts)
            {
                if (!facts_[id].dead)
                {
                    out.push_back(facts_[id].args);
                    ++model.stored;
                }
            }
            for (const bool w : p.widened)
                model.widened_positions += w ? 1 : 0;
            BigInt prod = 1;
            for (uint32_t i = 0; i < p.arity; ++i)
                prod *= options_.widening + 1;
            model.fact_bound += prod;
        }
        model.goals = std::move(goals_);
        return model;
    }

private:
    uint32_t lookup(const std::string& name) const
    {
        const auto it = pred_index_.find(name);
        if (it == pred_index_.end())
            throw std::invalid_argument("undeclared predicate " + name);
        return it->second;
    }

    void fire(size_t ci, int64_t parent, const std::vector<AbstractWord>& vars)
    {
        const auto& c = system_.clauses[ci];
        for (const auto& g : c.guards)
            if (!evaluate(g, vars))
                return;
        if (c.is_goal())
        {
            if (!goals_.contains(c.goal))
            {
                auto w = witness(parent);
                w.push_back({WitnessStep::Kind::Clause, ci, c.label, "", {}});
                goals_.emplace(c.goal, std::move(w));
                if (options_.stop_at_query && *options_.stop_at_query == c.goal)
                    stopped_ = true;
            }
            return;
        }
        std::vector<AbstractWord> args;
        args.reserve(c.head->args.size());
        for (const auto& t : c.head->args)
            args.push_back(evaluate(t, vars));
        insert(lookup(c.head->pred), std::move(args), parent, static_cast<int64_t>(ci));
    }

    void insert(uint32_t pred, std::vector<AbstractWord> args, int64_t parent, int64_t clause)
    {
        auto& p = preds_[pred];
        for (uint32_t pos = 0; pos < p.arity; ++pos)
        {
            if (p.widened[pos] || args[pos].is_top())
                continue;
            if (p.seen[pos].insert(args[pos].value()).second && p.seen[pos].size() > options_.widening)
                widen(pred, pos);
        }
        for (uint32_t pos = 0; pos < p.arity; ++pos)
            if (p.widened[pos])
                args[pos] = AbstractWord::top();
        add(pred, std::move(args), parent, clause);
    }

    void add(uint32_t pred, std::vector<AbstractWord> args, int64_t parent, int64_t clause)
    {
        auto& p = preds_[pred];
        if (p.index.contains(args))
            return;
        const auto id = facts_.size();
        p.index.emplace(args, id);
        p.facts.push_back(id);
        facts_.push_back(FactRecord{pred, std::move(args), parent, clause});
        work_.push_back(id);
    }

    /// Every existing fact with a constant at `pos` is replaced by its Top version.
    void widen(uint32_t pred, uint32_t pos)
    {
        auto& p = preds_[pred];
        p.widened[pos] = true;
        const auto ids = p.facts;
        for (const auto id : ids)
        {
            if (facts_[id].dead || facts_[id].args[pos].is_top())
                continue;
            facts_[id].dead = true;
            auto args = facts_[id].args;
            args[pos] = AbstractWord::top();
            add(pred, std::move(args), static_cast<int64_t>(id), widen_step);
        }
    }

    Witness witness(int64_t id) const
    {
        Witness w;
        while (id >= 0)
        {
            const auto& f = facts_[static_cast<size_t>(id)];
            WitnessStep step;
            if (f.clause == widen_step)
            {
                step.kind = WitnessStep::Kind::Widen;
                step.label = "widen";
            }
            else
            {
                step.clause = static_cast<size_t>(f.clause);
                step.label = system_.clauses[step.clause].label;
            }
            step.pred = preds_[f.pred].name;
            step.args = f.args;
            w.push_back(std::move(step));
            id = f.parent;
        }
        return {w.rbegin(), w.rend()};
    }

    const HornSystem& system_;
    FixpointOptions options_;
    std::vector<PredState> preds_;
    std::unordered_map<std::string, uint32_t> pred_index_;
    std::vector<FactRecord> facts_;
    std::deque<size_t> work_;
    std::map<std::string, Witness> goals_;
    bool stopped_ = false;
};
}  // namespace

LeastModel compute_least_model(const HornSystem& system, const FixpointOptions& options)
{
    return Engine{system, options}.run();
}

SolverVerdict solve_internal(const HornSystem& system, const std::string& query, size_t widening)
{
    if (!system.has_query(query))
        throw std::invalid_argument("query not declared: " + query);
    const auto start = std::chrono::steady_clock::now();
    FixpointOptions options;
    options.widening = widening;
    options.stop_at_query = query;
    auto model = compute_least_model(system, options);

    SolverVerdict v;
    v.solver = "internal";
    v.facts = model.stored;
    if (const auto it = model.goals.find(query); it != model.goals.end())
    {
        v.outcome = Outcome::QueryReachable;
        v.witness = std::move(it->second);
        v.detail = "goal derived";
    }
    else
    {
        v.outcome = Outcome::QueryUnreachable;
        v.detail = "fixpoint reached";
    }
    if (model.widened_positions > 0)
        v.detail += "; " + std::to_string(model.widened_positions) + " argument positions widened";
    v.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return v;
}

std::optional<std::string> replay_witness(const HornSystem& system, const Witness& witness)
{
    if (witness.empty())
        return "empty witness";
    const WitnessStep* prev = nullptr;
    for (size_t i = 0; i < witness.size(); ++i)
    {
        const auto& step = witness[i];
        const std::string where = "step " + std::to_string(i) + " (" + step.label + ")";
        const bool last = i + 1 == witness.size();
        if (step.kind == WitnessStep::Kind::Widen)
        {
            if (!prev || prev->pred != step.pred || !subsumes(step.args, prev->args))
                return where + ": widening does not generalize the previous fact";
            prev = &step;
            continue;
        }
        if (step.clause >= system.clauses.size())
            return where + ": no such clause";
        const auto& c = system.clauses[step.clause];
        if (c.label != step.label)
            return where + ": label mismatch";
        std::span<const AbstractWord> vars;
        if (c.body)
        {
            if (!prev || prev->pred != *c.body)
                return where + ": body does not match the previous fact";
            vars = prev->args;
        }
        else if (prev)
        {
            return where + ": fact clause in the middle of a derivation";
        }
        for (const auto& g : c.guards)
            if (!evaluate(g, vars))
                return where + ": guard " + std::to_string(&g - c.guards.data()) + " fails";
        if (c.is_goal())
        {
            if (!last)
                return where + ": goal before the end";
            return std::nullopt;
        }
        if (last)
            return where + ": derivation does not end in a goal";
        if (c.head->pred != step.pred || c.head->args.size() != step.args.size())
            return where + ": head predicate mismatch";
        std::vector<AbstractWord> derived;
        for (const auto& t : c.head->args)
            derived.push_back(evaluate(t, vars));
        // Positions widened earlier are stored as Top.
        if (!subsumes(step.args, derived))
            return where + ": recorded fact does not cover the clause result";
        prev = &step;
    }
    return "derivation does not end in a goal";
}

}  // namespace evmhorn::horn
