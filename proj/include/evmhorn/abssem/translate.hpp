// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evmhorn/horn/ir.hpp"
#include "evmhorn/pre/cfg.hpp"

namespace evmhorn::abssem
{
inline constexpr uint64_t mode_first = 0;
inline constexpr uint64_t mode_reenter = 1;

/// Argument layout of S_<pc>_<h>:
///   mode, called, s0..s(h-1), tracked memory words..., memory summary,
///   tracked storage cells..., storage summary.
struct StateLayout
{
    std::vector<Word> memory_offsets;
    std::vector<Word> storage_keys;

    static constexpr uint32_t mode = 0;
    static constexpr uint32_t called = 1;
    static constexpr uint32_t stack(uint32_t i) noexcept { return 2 + i; }

    uint32_t memory(uint32_t h, size_t j) const noexcept { return 2 + h + static_cast<uint32_t>(j); }
    uint32_t memory_summary(uint32_t h) const noexcept { return memory(h, memory_offsets.size()); }
    uint32_t storage(uint32_t h, size_t j) const noexcept
    {
        return memory_summary(h) + 1 + static_cast<uint32_t>(j);
    }
    uint32_t storage_summary(uint32_t h) const noexcept { return storage(h, storage_keys.size()); }
    uint32_t arity(uint32_t h) const noexcept { return storage_summary(h) + 1; }

    std::optional<size_t> memory_index(const Word& offset) const;
    std::optional<size_t> storage_index(const Word& key) const;
};

std::string predicate_name(uint64_t pc, uint32_t height);

/// A reachable instruction state whose opcode matters to a property.
struct Site
{
    pre::StateKey key;
    uint8_t opcode = 0;
};

struct TranslateConfig
{
    /// Replace stack operands that the preanalysis proved constant by literals.
    bool use_preanalysis_constants = true;
};

struct ContractModel
{
    pre::Cfg cfg;
    StateLayout layout;
    horn::HornSystem system;
    /// Executing call-class, SSTORE and SELFDESTRUCT states, in canonical order.
    std::vector<Site> sites;
};

/// Entry fact, instruction rules, call effects and reentering links for every
/// reachable (pc, height) state. No queries are added here.
ContractModel translate_contract(pre::Cfg cfg, const TranslateConfig& config = {});

/// Clause-level builders, exposed for testing.
struct RuleContext
{
    const pre::Cfg& cfg;
    const StateLayout& layout;
    const TranslateConfig& config;
    bool contract_calls;
};

/// Instruction semantics for the state `key` (excluding call effects).
std::vector<horn::Clause> rule_for_instruction(const RuleContext& ctx, pre::StateKey key);

/// Success, failure and reentering-link clauses of a call-class state.
std::vector<horn::Clause> call_effect_clauses(const RuleContext& ctx, pre::StateKey key);

/// First-execution entry fact plus the exit links of halting states in
/// reentering mode.
std::vector<horn::Clause> entry_and_reenter_clauses(const RuleContext& ctx);

}  // namespace evmhorn::abssem
