// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "evmhorn/abssem/translate.hpp"
#include "evmhorn/horn/fixpoint.hpp"
#include "evmhorn/horn/text.hpp"
#include "evmhorn/oracle/differential.hpp"

using namespace evmhorn;
using namespace evmhorn::abssem;

namespace
{
// PUSH1 0 (x4), CALLER, GAS, <call>, STOP. The call takes six operands, or
// seven for CALL/CALLCODE (an extra value push).
std::string call_then_stop(std::string_view opcode, bool value)
{
    return std::string{value ? "6000" : ""} + "6000600060006000335a" + std::string{opcode} + "00";
}

ContractModel translate_hex(std::string_view hex)
{
    return translate_contract(pre::run_preanalysis(evm::decode_hex(hex)));
}

const horn::Clause* find_clause(const ContractModel& m, std::string_view label)
{
    for (const auto& c : m.system.clauses)
        if (c.label == label)
            return &c;
    return nullptr;
}
}  // namespace

TEST(AbssemLayout, ArgumentPositions)
{
    StateLayout l;
    l.memory_offsets = {0, 32};
    l.storage_keys = {7};
    EXPECT_EQ(l.stack(0), 2u);
    EXPECT_EQ(l.memory(3, 0), 5u);
    EXPECT_EQ(l.memory_summary(3), 7u);
    EXPECT_EQ(l.storage(3, 0), 8u);
    EXPECT_EQ(l.storage_summary(3), 9u);
    EXPECT_EQ(l.arity(3), 10u);
    EXPECT_EQ(l.storage_index(7), 0u);
    EXPECT_EQ(l.storage_index(8), std::nullopt);
    EXPECT_EQ(predicate_name(12, 3), "S_12_3");
}

TEST(AbssemTranslate, EntryStateIsFirstModeWithUnknownStorage)
{
    // PUSH1 1, PUSH1 0, SSTORE, STOP
    const auto m = translate_hex("600160005500");
    const auto* entry = find_clause(m, "entry");
    ASSERT_NE(entry, nullptr);
    ASSERT_TRUE(entry->is_fact());
    EXPECT_EQ(entry->head->pred, "S_0_0");
    const auto& args = entry->head->args;
    EXPECT_EQ(args[StateLayout::mode], horn::Term::literal(mode_first));
    EXPECT_EQ(args[StateLayout::called], horn::Term::literal(0));
    EXPECT_TRUE(args[m.layout.storage_summary(0)].is_top());
    for (size_t j = 0; j < m.layout.storage_keys.size(); ++j)
        EXPECT_TRUE(args[m.layout.storage(0, j)].is_top());
    EXPECT_NO_THROW(horn::validate(m.system));
}

TEST(AbssemTranslate, CallFreeContractHasNoReenteringLinks)
{
    const auto m = translate_hex("600160005500");
    for (const auto& c : m.system.clauses)
        EXPECT_EQ(c.label.find(":exit"), std::string::npos) << c.label;
    const auto model = horn::compute_least_model(m.system);
    for (const auto& [pred, facts] : model.facts)
        for (const auto& f : facts)
            EXPECT_EQ(f[StateLayout::mode], AbstractWord::constant(mode_first));
}

TEST(AbssemTranslate, CallHasSuccessFailureAndReenterClauses)
{
    const auto m = translate_hex(call_then_stop("f1", true));
    const auto* ok = find_clause(m, "12:CALL:ok");
    const auto* fail = find_clause(m, "12:CALL:fail");
    const auto* reenter = find_clause(m, "12:CALL:reenter");
    ASSERT_TRUE(ok && fail && reenter);
    const uint32_t h_after = 1;
    EXPECT_EQ(ok->head->args[StateLayout::called], horn::Term::literal(1));
    EXPECT_TRUE(ok->head->args[StateLayout::stack(0)].is_top());
    EXPECT_EQ(fail->head->args[StateLayout::stack(0)], horn::Term::literal(0));
    // A successful external call may have changed any storage; a failed one did not.
    EXPECT_TRUE(ok->head->args[m.layout.storage_summary(h_after)].is_top());
    EXPECT_TRUE(fail->head->args[m.layout.storage_summary(h_after)].is_var());
    EXPECT_EQ(reenter->head->pred, "S_0_0");
    EXPECT_EQ(reenter->head->args[StateLayout::mode], horn::Term::literal(mode_reenter));
    // Reentering executions start over at pc 0 with the call-site storage.
    EXPECT_TRUE(reenter->head->args[m.layout.storage_summary(0)].is_var());
    EXPECT_NE(find_clause(m, "13:STOP:exit"), nullptr);
}

TEST(AbssemTranslate, StaticCallKeepsStorage)
{
    const auto m = translate_hex(call_then_stop("fa", false));
    const auto* ok = find_clause(m, "10:STATICCALL:ok");
    ASSERT_NE(ok, nullptr);
    EXPECT_TRUE(ok->head->args[m.layout.storage_summary(1)].is_var());
}

TEST(AbssemTranslate, DelegateCallReentersWithUnknownStorage)
{
    const auto m = translate_hex(call_then_stop("f4", false));
    const auto* reenter = find_clause(m, "10:DELEGATECALL:reenter");
    ASSERT_NE(reenter, nullptr);
    EXPECT_TRUE(reenter->head->args[m.layout.storage_summary(0)].is_top());
}

TEST(AbssemTranslate, SitesListCallsAndStores)
{
    // PUSH1 1, PUSH1 0, SSTORE, then a CALL.
    const auto m = translate_hex("6001600055" + call_then_stop("f1", true));
    std::vector<uint8_t> ops;
    for (const auto& s : m.sites)
        ops.push_back(s.opcode);
    EXPECT_EQ(ops, (std::vector<uint8_t>{0x55, 0xf1}));
}

TEST(AbssemTranslate, TranslationIsDeterministic)
{
    const auto hex = "6001600055" + call_then_stop("f1", true);
    EXPECT_EQ(horn::emit_horn_ir(translate_hex(hex).system), horn::emit_horn_ir(translate_hex(hex).system));
}

TEST(AbssemTranslate, PreanalysisConstantsOnlyAffectPrecision)
{
    std::mt19937_64 rng{3};
    for (int i = 0; i < 60; ++i)
    {
        const auto program = oracle::generate_program(rng);
        pre::Cfg cfg;
        try
        {
            cfg = pre::run_preanalysis(evm::decode_bytecode(program.code));
        }
        catch (const AnalysisError&)
        {
            continue;
        }
        TranslateConfig plain;
        plain.use_preanalysis_constants = false;
        for (const auto& config : {TranslateConfig{}, plain})
        {
            const auto m = translate_contract(cfg, config);
            const auto facts = horn::compute_least_model(m.system);
            const auto envs = oracle::exhaustive_calldata(program.calldata_bytes);
            EXPECT_TRUE(oracle::differential_check(m, facts, envs).ok()) << bytes_to_hex(program.code);
        }
    }
}
