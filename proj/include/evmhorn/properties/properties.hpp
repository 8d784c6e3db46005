// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evmhorn/abssem/translate.hpp"
#include "evmhorn/diagnostics.hpp"
#include "evmhorn/horn/fixpoint.hpp"

namespace evmhorn::properties
{
enum class PropertyKind : uint8_t
{
    SingleEntrancy,
    StoreAfterCall,
    Assertion,
};

std::string_view to_string(PropertyKind k) noexcept;
std::optional<PropertyKind> parse_property(std::string_view name) noexcept;

/// A state part an assertion may mention: stack slot s<i> or storage[<key>].
struct StatePart
{
    enum class Kind : uint8_t
    {
        Stack,
        Storage,
    };
    Kind kind = Kind::Stack;
    uint32_t slot = 0;
    Word key = 0;

    bool operator==(const StatePart&) const = default;
};

struct AssertionTerm
{
    BigInt coeff = 1;
    StatePart part;

    bool operator==(const AssertionTerm&) const = default;
};

struct AssertionSide
{
    std::vector<AssertionTerm> terms;
    BigInt constant = 0;

    bool operator==(const AssertionSide&) const = default;
};

/// At `pc`, lhs rel rhs must hold (integer comparison of word values).
struct Assertion
{
    uint64_t pc = 0;
    AssertionSide lhs;
    horn::Rel rel = horn::Rel::Eq;
    AssertionSide rhs;
    size_t line = 0;

    bool operator==(const Assertion&) const = default;
};

struct PropertySpec
{
    PropertyKind kind = PropertyKind::SingleEntrancy;
    bool count_staticcall = true;
    bool count_selfdestruct = false;
    std::vector<Assertion> assertions;
};

/// Sidecar format, one per line: "pc <n> assert <lin> <rel> <lin>", where a
/// linear expression sums optionally scaled s0..s15 and storage[<word>] terms
/// and integer constants; '#' starts a comment. Throws std::invalid_argument
/// naming the line.
std::vector<Assertion> parse_assertions(std::string_view text);

/// Query names used in the Horn system.
inline constexpr std::string_view single_entrancy_query_name = "single-entrancy";
inline constexpr std::string_view store_after_call_query_name = "store-after-call";
inline constexpr std::string_view assertion_query_name = "assertions";

/// Goal at every call-class state in reentering mode.
std::string single_entrancy_query(abssem::ContractModel& model, const PropertySpec& spec);

/// Goal at every SSTORE, DELEGATECALL and CALLCODE state reached after a call.
std::string store_after_call_query(abssem::ContractModel& model);

/// Goal at every state of each assertion's pc where the negated relation may
/// hold. Throws std::invalid_argument for parts the state does not have.
/// Assertions at unreachable pcs add an UnreachableTarget diagnostic.
std::string assertion_query(
    abssem::ContractModel& model, const PropertySpec& spec, std::vector<Diagnostic>& diagnostics);

/// Adds the query for `spec` to the model's system and returns its name.
std::string add_query(abssem::ContractModel& model, const PropertySpec& spec, std::vector<Diagnostic>& diagnostics);

enum class Verdict : uint8_t
{
    Secure,
    Insecure,
    Unknown,
};

std::string_view to_string(Verdict v) noexcept;

struct AnalysisVerdict
{
    Verdict verdict = Verdict::Unknown;
    PropertyKind property = PropertyKind::SingleEntrancy;
    std::string engine;
    horn::SolverVerdict solver;
};

/// QueryUnreachable → Secure, QueryReachable → Insecure, Unknown → Unknown.
/// This is the only place a Secure verdict is produced.
AnalysisVerdict interpret_verdict(horn::SolverVerdict sv, PropertyKind property);

}  // namespace evmhorn::properties
