// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "evmhorn/cli/commands.hpp"
#include "evmhorn/cli/pipeline.hpp"
#include "evmhorn/horn/text.hpp"

using namespace evmhorn;
using namespace evmhorn::cli;
namespace fs = std::filesystem;

namespace
{
const fs::path corpus = fs::path{EVMHORN_SOURCE_DIR} / "corpus";

struct Run
{
    int code = 0;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name)
{
    return (corpus / name).string();
}

fs::path temp_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("evmhorn-cli-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream{p} << text;
}
}  // namespace

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(invoke({}).code, exit_usage);
    EXPECT_EQ(invoke({"frobnicate", "x"}).code, exit_usage);
    EXPECT_EQ(invoke({"analyze"}).code, exit_usage);
    EXPECT_EQ(invoke({"analyze", fixture("dao_min.hex"), "--engine", "quantum"}).code, exit_usage);
    EXPECT_EQ(invoke({"analyze", fixture("dao_min.hex"), "--passes", "const-fold,bogus"}).code, exit_usage);
    EXPECT_EQ(invoke({"analyze", fixture("dao_min.hex"), "-K", "0"}).code, exit_usage);
    EXPECT_EQ(invoke({"analyze", "/nonexistent/code.hex"}).code, exit_usage);
    const auto no_solver = invoke({"analyze", fixture("dao_min.hex"), "--engine", "external"});
    EXPECT_EQ(no_solver.code, exit_usage);
    EXPECT_NE(no_solver.err.find("configuration error"), std::string::npos);
    EXPECT_EQ(invoke({"analyze", fixture("store_zero.hex"), "--property", "assertion"}).code, exit_usage);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, AnalyzeExitCodesFollowVerdicts)
{
    const auto insecure = invoke({"analyze", fixture("dao_min.hex")});
    EXPECT_EQ(insecure.code, exit_insecure);
    EXPECT_NE(insecure.out.find("insecure"), std::string::npos);
    EXPECT_EQ(invoke({"analyze", fixture("lock_internal.hex")}).code, exit_secure);
    EXPECT_EQ(invoke({"analyze", fixture("call_then_store.hex"), "--property", "store-after-call"}).code,
        exit_insecure);
    EXPECT_EQ(invoke({"analyze", fixture("store_zero.hex"), "--property", "assertion", "--assertions",
                  fixture("store_zero.assert")})
                  .code,
        exit_secure);
}

TEST(Cli, JsonReportSchema)
{
    const auto r = invoke({"analyze", fixture("dao_min.hex"), "--format", "json"});
    ASSERT_EQ(r.code, exit_insecure);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], std::string{report_schema});
    EXPECT_EQ(j["verdict"], "insecure");
    EXPECT_EQ(j["property"], "single-entrancy");
    EXPECT_EQ(j["engine"], "internal");
    EXPECT_TRUE(j["contract"]["code_hash"].get<std::string>().starts_with("0x"));
    EXPECT_TRUE(j["witness"].is_array());
    EXPECT_FALSE(j["witness"].empty());
    for (const auto* key : {"instructions", "blocks", "predicates", "clauses", "facts", "solver_ms", "wall_ms"})
        EXPECT_TRUE(j["stats"].contains(key)) << key;
}

TEST(Cli, TimingFieldsCanBeOmitted)
{
    const auto report = analyze_file(corpus / "lock_internal.hex", {});
    EXPECT_EQ(report.verdict, "secure");
    const auto j = report_to_json(report, false);
    EXPECT_FALSE(j["stats"].contains("solver_ms"));
    EXPECT_FALSE(j["stats"].contains("wall_ms"));
    EXPECT_EQ(j, report_to_json(analyze_file(corpus / "lock_internal.hex", {}), false));
    EXPECT_TRUE(j["witness"].is_null());
}

TEST(Cli, AnalysisErrorsExitTwoWithDiagnostic)
{
    const auto r = invoke({"analyze", fixture("timestamp_jump.hex"), "--format", "json"});
    EXPECT_EQ(r.code, exit_analysis_error);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["verdict"], "error");
    ASSERT_FALSE(j["diagnostics"].empty());
    EXPECT_EQ(j["diagnostics"][0]["kind"], "UnreconstructableControlFlow");

    const auto dir = temp_dir("decode");
    write(dir / "bad.hex", "60zz");
    const auto bad = invoke({"analyze", (dir / "bad.hex").string(), "--format", "json"});
    EXPECT_EQ(bad.code, exit_analysis_error);
    EXPECT_EQ(nlohmann::json::parse(bad.out)["diagnostics"][0]["kind"], "DecodeError");
    fs::remove_all(dir);
}

TEST(Cli, DisasmCfgAndEmitters)
{
    const auto listing = invoke({"disasm", fixture("dao_min.hex")});
    EXPECT_EQ(listing.code, 0);
    EXPECT_NE(listing.out.find("CALL"), std::string::npos);

    const auto dot = invoke({"cfg", fixture("flipper.hex")});
    EXPECT_EQ(dot.code, 0);
    EXPECT_TRUE(dot.out.starts_with("digraph"));
    EXPECT_EQ(nlohmann::json::parse(invoke({"cfg", fixture("flipper.hex"), "--format", "json"}).out).is_object(), true);
    EXPECT_EQ(invoke({"cfg", fixture("timestamp_jump.hex")}).code, exit_analysis_error);

    const auto chc = invoke({"emit-chc", fixture("dao_min.hex")});
    EXPECT_EQ(chc.code, 0);
    EXPECT_NE(chc.out.find("(set-logic HORN)"), std::string::npos);

    const auto ir = invoke({"emit-ir", fixture("dao_min.hex"), "--passes", "none"});
    EXPECT_EQ(ir.code, 0);
    EXPECT_TRUE(horn::parse_horn_ir(ir.out).has_query("single-entrancy"));
}

TEST(Cli, OutputFileOption)
{
    const auto dir = temp_dir("output");
    const auto path = dir / "dao.smt2";
    const auto r = invoke({"emit-chc", fixture("dao_min.hex"), "-o", path.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in{path};
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(text.str(), invoke({"emit-chc", fixture("dao_min.hex")}).out);
    fs::remove_all(dir);
}

TEST(Cli, ConfigFileSuppliesDefaults)
{
    const auto dir = temp_dir("config");
    write(dir / "evmhorn.toml", "property = \"store-after-call\"\n");
    const auto r = invoke({"--config", (dir / "evmhorn.toml").string(), "analyze", fixture("call_then_store.hex")});
    EXPECT_EQ(r.code, exit_insecure);
    EXPECT_NE(r.out.find("store-after-call"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, RegressAndMinitest)
{
    EXPECT_EQ(invoke({"regress", corpus.string()}).code, 0);
    EXPECT_EQ(invoke({"minitest", (fs::path{EVMHORN_SOURCE_DIR} / "tests" / "minitests").string()}).code, 0);

    const auto dir = temp_dir("regress");
    fs::copy_file(corpus / "dao_min.hex", dir / "dao_min.hex");
    write(dir / "manifest.txt", "# wrong on purpose\ndao_min single-entrancy secure\n");
    const auto r = invoke({"regress", dir.string(), "--format", "json"});
    EXPECT_EQ(r.code, exit_analysis_error);
    EXPECT_FALSE(nlohmann::json::parse(r.out)["ok"].get<bool>());
    fs::remove_all(dir);
}

TEST(Cli, ManifestParsing)
{
    const auto m = parse_manifest("# c\n\ndao_min single-entrancy insecure\nx store-after-call secure # tail\n");
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[1].property, properties::PropertyKind::StoreAfterCall);
    EXPECT_EQ(m[1].line, 4u);
    EXPECT_THROW(parse_manifest("x single-entrancy\n"), std::invalid_argument);
    EXPECT_THROW(parse_manifest("x nonsense secure\n"), std::invalid_argument);
    EXPECT_THROW(parse_manifest("x single-entrancy maybe\n"), std::invalid_argument);
}

TEST(Cli, AnalyzeIsDeterministic)
{
    for (const auto* name : {"dao_min.hex", "lock_public.hex", "counter_loop.hex"})
    {
        const auto a = invoke({"emit-chc", fixture(name)});
        const auto b = invoke({"emit-chc", fixture(name)});
        EXPECT_EQ(a.out, b.out) << name;
        auto ja = nlohmann::json::parse(invoke({"analyze", fixture(name), "--format", "json"}).out);
        auto jb = nlohmann::json::parse(invoke({"analyze", fixture(name), "--format", "json"}).out);
        for (auto* j : {&ja, &jb})
        {
            (*j)["stats"].erase("solver_ms");
            (*j)["stats"].erase("wall_ms");
        }
        EXPECT_EQ(ja, jb) << name;
    }
}
