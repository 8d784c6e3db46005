// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "evmhorn/abssem/translate.hpp"
#include "evmhorn/horn/fixpoint.hpp"
#include "evmhorn/oracle/interpreter.hpp"

namespace evmhorn::oracle
{
struct Violation
{
    size_t trace = 0;
    size_t step = 0;
    uint64_t pc = 0;
    uint32_t height = 0;
    std::string reason;
};

struct CoverageReport
{
    size_t traces = 0;
    size_t states = 0;
    size_t violation_count = 0;
    /// The first few violations, for diagnosis.
    std::vector<Violation> violations;

    bool ok() const noexcept { return violation_count == 0; }
    void add(Violation v);
    void merge(const CoverageReport& other);
};

/// Preanalysis soundness: executed jumps are resolved edges, concrete heights
/// are recorded heights, and every stack slot lies in the state's value set.
CoverageReport check_cfg(const pre::Cfg& cfg, std::span<const Trace> traces);

/// Every concrete state must be covered by a first-execution fact of its
/// (pc, height) predicate: same called flag, stack and tracked cells
/// pointwise in the concretization, untracked cells within the summaries.
CoverageReport check_traces(
    const abssem::ContractModel& model, const horn::LeastModel& facts, std::span<const Trace> traces);

/// Runs every script and checks both the CFG and the Horn model.
CoverageReport differential_check(const abssem::ContractModel& model, const horn::LeastModel& facts,
    std::span<const EnvScript> envs);

/// Every calldata of `bytes` bytes over the alphabet {0, 1}.
std::vector<EnvScript> exhaustive_calldata(size_t bytes, const EnvScript& base = {});

struct GeneratorConfig
{
    /// Upper bound on generated instructions, pushes included.
    size_t max_instructions = 64;
    /// Calldata byte positions the program may read.
    size_t calldata_bytes = 3;
};

struct GeneratedProgram
{
    Bytes code;
    size_t calldata_bytes = 0;
};

/// Random call-free program over the core opcode subset with constant jump
/// targets, storage keys and memory offsets.
GeneratedProgram generate_program(std::mt19937_64& rng, const GeneratorConfig& config = {});

/// A seeded bug in the abstract semantics, applied to a translated model.
struct Mutant
{
    std::string name;
    std::function<void(abssem::ContractModel&)> apply;
};

const std::vector<Mutant>& seeded_mutants();

}  // namespace evmhorn::oracle
