// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evmhorn/horn/ir.hpp"

namespace evmhorn::horn
{
enum class Outcome : uint8_t
{
    QueryUnreachable,
    QueryReachable,
    Unknown,
};

std::string_view to_string(Outcome o) noexcept;

/// One derivation step of a goal: either a clause application or a widening
/// of the previous fact.
struct WitnessStep
{
    enum class Kind : uint8_t
    {
        Clause,
        Widen,
    };
    Kind kind = Kind::Clause;
    /// Index into HornSystem::clauses (Clause steps).
    size_t clause = 0;
    std::string label;
    /// Derived predicate, or empty for the final goal step.
    std::string pred;
    std::vector<AbstractWord> args;
};

using Witness = std::vector<WitnessStep>;

struct SolverVerdict
{
    Outcome outcome = Outcome::Unknown;
    std::string solver;
    double wall_ms = 0;
    std::optional<Witness> witness;
    std::string detail;
    /// Stored facts (internal engine only).
    size_t facts = 0;
};

struct FixpointOptions
{
    /// Distinct constants per predicate argument before it widens to Top.
    size_t widening = 16;
    /// Stop as soon as a goal of this query is derived.
    std::optional<std::string> stop_at_query;
};

struct LeastModel
{
    /// Live facts per predicate, in derivation order.
    std::map<std::string, std::vector<std::vector<AbstractWord>>> facts;
    /// Goals derived, by query name, with the witness of the first derivation.
    std::map<std::string, Witness> goals;
    size_t stored = 0;
    size_t widened_positions = 0;
    /// Σ over predicates of Π over positions of (W + 1).
    BigInt fact_bound = 0;
};

LeastModel compute_least_model(const HornSystem& system, const FixpointOptions& options = {});

SolverVerdict solve_internal(const HornSystem& system, const std::string& query, size_t widening = 16);

/// Checks every step: the clause's body matches the previous fact, its guards
/// hold, and its head evaluates to the recorded fact; widening steps must
/// generalize the previous fact. Returns an explanation on failure.
std::optional<std::string> replay_witness(const HornSystem& system, const Witness& witness);

}  // namespace evmhorn::horn
