// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "evmhorn/horn/fixpoint.hpp"
#include "evmhorn/oracle/differential.hpp"
#include "evmhorn/oracle/minitest.hpp"

using namespace evmhorn;
using namespace evmhorn::oracle;
namespace fs = std::filesystem;

namespace
{
Trace run(std::string_view hex, const EnvScript& env = {})
{
    return exec_concrete(evm::decode_hex(hex), env);
}

// PUSH1 0 (x5), CALLER, GAS, CALL, then `tail`.
std::string after_call(std::string_view tail)
{
    return "60006000600060006000335af1" + std::string{tail};
}

fs::path temp_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("evmhorn-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream{p} << text;
}
}  // namespace

TEST(OracleInterpreter, RecordsStateBeforeEachStepAndImplicitStop)
{
    // PUSH1 2, PUSH1 3, ADD (then the implicit STOP)
    const auto t = run("6002600301");
    ASSERT_EQ(t.states.size(), 4u);
    EXPECT_EQ(t.states[0].pc, 0u);
    EXPECT_TRUE(t.states[0].stack.empty());
    EXPECT_EQ(t.states[2].stack, (std::vector<Word>{3, 2}));
    EXPECT_EQ(t.states[3].pc, 5u);
    EXPECT_EQ(t.states[3].stack, (std::vector<Word>{5}));
    EXPECT_EQ(t.halt, HaltReason::Stop);
}

TEST(OracleInterpreter, SignedOps)
{
    const Word minus_eight = Word{0} - 8;
    // PUSH32 -8, PUSH1 1, SAR
    const auto t = run("7f" + std::string(62, 'f') + "f8" + "60011d");
    EXPECT_EQ(t.states.back().stack, (std::vector<Word>{Word{0} - 4}));
    // PUSH1 0xf8, PUSH1 0, SIGNEXTEND
    EXPECT_EQ(run("60f860000b").states.back().stack, (std::vector<Word>{minus_eight}));
    // PUSH1 -8 via SUB, then SDIV by 3: -2 truncated toward zero.
    EXPECT_EQ(run("6003" "6008600003" "05").states.back().stack, (std::vector<Word>{Word{0} - 2}));
}

TEST(OracleInterpreter, CallsConsumeScriptInOrder)
{
    EnvScript env;
    env.calls = {{true, {}}, {false, {}}};
    // Two calls, then STOP.
    const auto t = run(after_call(after_call("00")), env);
    EXPECT_EQ(t.states.back().stack, (std::vector<Word>{0, 1}));
    EXPECT_TRUE(t.states.back().called);
    // Without a script every call fails.
    EXPECT_EQ(run(after_call("00")).states.back().stack, (std::vector<Word>{0}));
}

TEST(OracleInterpreter, RevertAndExceptionalHaltsRestoreStorage)
{
    EnvScript env;
    env.storage = {{0, 5}};
    // PUSH1 1, PUSH1 0, SSTORE, PUSH1 0, PUSH1 0, REVERT
    const auto reverted = run("600160005560006000fd", env);
    EXPECT_EQ(reverted.halt, HaltReason::Revert);
    EXPECT_EQ(reverted.final_storage, env.storage);
    // The same store followed by a bad jump.
    const auto bad = run("6001600055600056", env);
    EXPECT_EQ(bad.halt, HaltReason::BadJump);
    EXPECT_EQ(bad.final_storage, env.storage);
    // And followed by STOP it persists.
    const auto kept = run("600160005500", env);
    EXPECT_EQ(kept.final_storage.at(0), 1);
}

TEST(OracleInterpreter, LimitsAndUnsupportedOpcodes)
{
    EnvScript env;
    env.step_limit = 50;
    EXPECT_EQ(run("5b600056", env).halt, HaltReason::StepLimit);
    EXPECT_THROW(run("600060006000303c"), UnsupportedOpcode);
    EXPECT_THROW(run("303f"), UnsupportedOpcode);
}

TEST(OracleInterpreter, HaltReasonNames)
{
    for (const auto r : {HaltReason::Stop, HaltReason::Return, HaltReason::Revert, HaltReason::SelfDestruct,
             HaltReason::Invalid, HaltReason::StackUnderflow, HaltReason::StackOverflow, HaltReason::BadJump,
             HaltReason::StepLimit, HaltReason::MemoryLimit})
        EXPECT_EQ(parse_halt_reason(to_string(r)), r);
    EXPECT_FALSE(is_exceptional(HaltReason::Revert));
    EXPECT_TRUE(is_exceptional(HaltReason::BadJump));
    EXPECT_FALSE(dump_trace(run("600100")).empty());
}

TEST(OracleDifferential, ExhaustiveCalldata)
{
    const auto envs = exhaustive_calldata(2);
    ASSERT_EQ(envs.size(), 4u);
    std::set<Bytes> seen;
    for (const auto& e : envs)
    {
        ASSERT_EQ(e.calldata.size(), 2u);
        for (const auto b : e.calldata)
            EXPECT_LE(b, 1);
        seen.insert(e.calldata);
    }
    EXPECT_EQ(seen.size(), 4u);
}

TEST(OracleDifferential, GeneratorStaysInCallFreeSubset)
{
    std::mt19937_64 a{5}, b{5};
    for (int i = 0; i < 200; ++i)
    {
        const auto p = generate_program(a);
        EXPECT_EQ(p.code, generate_program(b).code);
        const auto stream = evm::decode_bytecode(p.code);
        EXPECT_LE(stream.instructions().size(), 64u);
        for (const auto& ins : stream.instructions())
        {
            EXPECT_FALSE(ins.opcode >= 0xf0 && ins.opcode != 0xf3 && ins.opcode != 0xfd && ins.opcode != 0xfe)
                << "call-class opcode " << int(ins.opcode);
        }
    }
}

TEST(OracleDifferential, DetectsTamperedCfg)
{
    // PUSH1 0, CALLDATALOAD, PUSH1 8, JUMPI, STOP, STOP, pad, JUMPDEST, STOP
    const auto stream = evm::decode_hex("60003560085700005B00");
    auto cfg = pre::run_preanalysis(stream);
    std::vector<Trace> traces;
    EnvScript env;
    env.calldata = Bytes(32, 0);
    env.calldata[31] = 1;
    traces.push_back(exec_concrete(stream, env));
    EXPECT_TRUE(check_cfg(cfg, traces).ok());
    cfg.jump_edges.at(5).clear();
    EXPECT_FALSE(check_cfg(cfg, traces).ok());
}

TEST(OracleDifferential, DetectsFactsThatMissAState)
{
    // PUSH1 7, PUSH1 0, SSTORE, STOP
    const auto m = abssem::translate_contract(pre::run_preanalysis(evm::decode_hex("600760005500")));
    auto facts = horn::compute_least_model(m.system);
    const std::vector<EnvScript> envs{EnvScript{}};
    EXPECT_TRUE(differential_check(m, facts, envs).ok());
    // Claim the pushed constant was 8.
    auto& fact = facts.facts.at("S_2_1").front();
    fact[abssem::StateLayout::stack(0)] = AbstractWord::constant(8);
    const auto report = differential_check(m, facts, envs);
    EXPECT_FALSE(report.ok());
    ASSERT_FALSE(report.violations.empty());
    EXPECT_EQ(report.violations[0].pc, 2u);
}

TEST(OracleDifferential, MutantsAreDistinctAndChangeTheSystem)
{
    const auto& mutants = seeded_mutants();
    ASSERT_GE(mutants.size(), 5u);
    std::set<std::string> names;
    for (const auto& m : mutants)
        names.insert(m.name);
    EXPECT_EQ(names.size(), mutants.size());

    std::mt19937_64 rng{9};
    std::vector<abssem::ContractModel> pool;
    while (pool.size() < 200)
    {
        try
        {
            pool.push_back(abssem::translate_contract(
                pre::run_preanalysis(evm::decode_bytecode(generate_program(rng).code))));
        }
        catch (const AnalysisError&)
        {
        }
    }
    for (const auto& mutant : mutants)
    {
        bool changed = false;
        for (const auto& base : pool)
        {
            auto m = base;
            mutant.apply(m);
            changed = changed || !(m.system == base.system);
        }
        EXPECT_TRUE(changed) << mutant.name;
    }
}

TEST(OracleMinitest, ParsesAndRuns)
{
    const auto t = parse_minitest(nlohmann::json::parse(R"({
        "name": "add", "code": "6002600301",
        "expected": {"halt": "stop", "stack": ["0x5"]}})"));
    EXPECT_EQ(run_minitest(t).status, MinitestResult::Status::Passed);
    auto wrong = t;
    wrong.expected.stack = std::vector<Word>{6};
    const auto r = run_minitest(wrong);
    EXPECT_EQ(r.status, MinitestResult::Status::Failed);
    EXPECT_NE(r.message.find("stack"), std::string::npos);
}

TEST(OracleMinitest, RejectsUnknownFields)
{
    EXPECT_THROW(parse_minitest(nlohmann::json::parse(R"({"name": "x", "code": "00", "expected": {"halt": "stop"},
        "extra": 1})")),
        std::invalid_argument);
    EXPECT_THROW(parse_minitest(nlohmann::json::parse(R"({"name": "x", "code": "00", "expected": {"hat": "stop"}})")),
        std::invalid_argument);
    EXPECT_THROW(parse_minitest(nlohmann::json::parse(R"({"name": "x", "code": "00", "expected": {}})")),
        std::invalid_argument);
}

TEST(OracleMinitest, DirectoryRunCountsStatuses)
{
    const auto dir = temp_dir("minitest");
    write(dir / "a.json", R"({"name": "a", "code": "00", "expected": {"halt": "stop"}})");
    write(dir / "b.json", R"({"name": "b", "code": "00", "expected": {"halt": "revert"}})");
    write(dir / "c.json", "{ not json");
    write(dir / "notes.txt", "ignored");
    const auto s = run_minitests(dir);
    EXPECT_EQ(s.results.size(), 3u);
    EXPECT_EQ(s.passed, 1u);
    EXPECT_EQ(s.failed, 1u);
    EXPECT_EQ(s.malformed, 1u);
    EXPECT_FALSE(s.ok());
    EXPECT_EQ(s.to_json()["passed"], 1);
    fs::remove_all(dir);
}

TEST(OracleMinitest, RepositorySuitePasses)
{
    const auto s = run_minitests(fs::path{EVMHORN_SOURCE_DIR} / "tests" / "minitests");
    EXPECT_GE(s.results.size(), 50u);
    EXPECT_TRUE(s.ok());
}
