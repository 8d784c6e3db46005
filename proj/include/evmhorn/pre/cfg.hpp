// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evmhorn/diagnostics.hpp"
#include "evmhorn/evm/bytecode.hpp"
#include "evmhorn/pre/value_set.hpp"

namespace evmhorn::pre
{
struct PreanalysisConfig
{
    /// Value-set size cap (K).
    size_t value_set_cap = 32;
    /// Distinct stack heights allowed per program counter (H_max).
    size_t max_heights = 16;
    /// Tracked storage keys / memory offsets before the rest fall to the summary cell.
    size_t max_tracked_cells = 64;
};

inline constexpr uint32_t max_stack_height = 1024;

/// An analysis state is identified by program counter and stack height.
struct StateKey
{
    uint64_t pc = 0;
    uint32_t height = 0;

    auto operator<=>(const StateKey&) const = default;
};

enum class EdgeKind : uint8_t
{
    Fallthrough,
    Jump,
    BranchTaken,
    BranchNotTaken,
};

struct Successor
{
    StateKey to;
    EdgeKind kind;

    bool operator==(const Successor&) const = default;
};

/// Stack slots, index 0 = top of stack.
using AbstractStack = std::vector<ValueSet>;

struct Cfg
{
    evm::InstructionStream stream;
    evm::BlockSkeleton skeleton;
    PreanalysisConfig config;

    /// Jump/branch-taken edges: jump pc -> target pcs.
    std::map<uint64_t, std::set<uint64_t>> jump_edges;
    /// Reachable stack heights per pc (includes the implicit STOP past the code end).
    std::map<uint64_t, std::set<uint32_t>> heights;
    /// (pc, slot-from-top) -> join of that slot over all reached heights.
    std::map<std::pair<uint64_t, uint32_t>, ValueSet> const_map;
    std::set<Word> tracked_storage_keys;
    std::set<Word> tracked_memory_offsets;

    /// Fixpoint states and the transitions between them.
    std::map<StateKey, AbstractStack> states;
    std::map<StateKey, std::vector<Successor>> successors;

    /// Informational findings (invalid jump targets, capped catalogs).
    std::vector<Diagnostic> diagnostics;

    const AbstractStack* state(StateKey key) const
    {
        const auto it = states.find(key);
        return it == states.end() ? nullptr : &it->second;
    }

    bool reachable(uint64_t pc) const { return heights.contains(pc); }
};

/// Forward value-set interpretation from (pc 0, empty stack) to a fixpoint.
/// Throws AnalysisError for UnreconstructableControlFlow or HeightOverflow.
Cfg reconstruct_cfg(const evm::InstructionStream& stream, const PreanalysisConfig& config = {});

/// Fills Cfg::const_map from the fixpoint states.
void propagate_constants(Cfg& cfg);

/// Fills the tracked storage-key and memory-offset catalogs.
void catalog_tracked_cells(Cfg& cfg);

/// reconstruct_cfg + propagate_constants + catalog_tracked_cells.
Cfg run_preanalysis(const evm::InstructionStream& stream, const PreanalysisConfig& config = {});

std::string export_cfg_dot(const Cfg& cfg);

nlohmann::json cfg_to_json(const Cfg& cfg);

}  // namespace evmhorn::pre
