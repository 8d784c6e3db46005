// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/cli/commands.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <map>

#include "evmhorn/cli/pipeline.hpp"
#include "evmhorn/horn/smtlib.hpp"
#include "evmhorn/horn/text.hpp"
#include "evmhorn/oracle/minitest.hpp"

namespace evmhorn::cli
{
namespace
{
struct Options
{
    std::string property = "single-entrancy";
    bool count_selfdestruct = false;
    bool count_staticcall = true;
    std::string engine = "internal";
    std::string solver;
    unsigned timeout = 600;
    size_t value_set_cap = 32;
    size_t max_heights = 16;
    size_t widening = 16;
    std::string opcode_table = "constantinople";
    std::string format = "text";
    std::string passes = "const-fold,prune-unreachable-predicates,inline-linear-predicates";
    std::string assertions;
    std::string input;
    std::string output;
};

AnalysisConfig make_config(const Options& o)
{
    AnalysisConfig c;
    const auto kind = properties::parse_property(o.property);
    if (!kind)
        throw ConfigError("unknown property '" + o.property + "'");
    c.property.kind = *kind;
    c.property.count_selfdestruct = o.count_selfdestruct;
    c.property.count_staticcall = o.count_staticcall;
    if (!o.assertions.empty())
        c.assertions_file = o.assertions;
    if (o.engine == "internal")
        c.engine = Engine::Internal;
    else if (o.engine == "external")
        c.engine = Engine::External;
    else
        throw ConfigError("unknown engine '" + o.engine + "'");
    c.solver_command = o.solver;
    c.timeout_seconds = o.timeout;
    c.value_set_cap = o.value_set_cap;
    c.max_heights = o.max_heights;
    c.widening = o.widening;
    const auto table = evm::parse_opcode_table(o.opcode_table);
    if (!table)
        throw ConfigError("unknown opcode table '" + o.opcode_table + "'");
    c.opcode_table = *table;
    if (o.format == "text")
        c.format = OutputFormat::Text;
    else if (o.format == "json")
        c.format = OutputFormat::Json;
    else
        throw ConfigError("unknown format '" + o.format + "'");
    c.passes.clear();
    if (o.passes != "none")
    {
        std::istringstream names{o.passes};
        std::string name;
        while (std::getline(names, name, ','))
        {
            const auto pass = horn::parse_pass(name);
            if (!pass)
                throw ConfigError("unknown optimization pass '" + name + "'");
            c.passes.push_back(*pass);
        }
    }
    c.validate();
    return c;
}

void emit(const Options& o, const std::string& text, std::ostream& out)
{
    if (o.output.empty())
    {
        out << text;
        return;
    }
    std::ofstream file{o.output, std::ios::binary};
    if (!file || !(file << text))
        throw std::runtime_error("cannot write " + o.output);
}

evm::InstructionStream load_stream(const Options& o, const AnalysisConfig& c)
{
    return evm::decode_bytecode(evm::load_code_file(o.input), c.opcode_table);
}

int report_analysis_error(const AnalysisError& e, std::ostream& err)
{
    for (const auto& d : e.diagnostics())
        err << "error: " << format(d) << '\n';
    return exit_analysis_error;
}

int cmd_analyze(const Options& o, std::ostream& out)
{
    const auto config = make_config(o);
    const auto report = analyze_file(o.input, config);
    emit(o, config.format == OutputFormat::Json ? report_to_json(report).dump(2) + "\n" : report_to_text(report), out);
    return exit_code(report);
}

int cmd_disasm(const Options& o, std::ostream& out)
{
    const auto config = make_config(o);
    emit(o, evm::disassemble_text(load_stream(o, config)), out);
    return 0;
}

int cmd_cfg(const Options& o, std::ostream& out)
{
    const auto config = make_config(o);
    pre::PreanalysisConfig pc;
    pc.value_set_cap = config.value_set_cap;
    pc.max_heights = config.max_heights;
    const auto cfg = pre::run_preanalysis(load_stream(o, config), pc);
    emit(o, config.format == OutputFormat::Json ? pre::cfg_to_json(cfg).dump(2) + "\n" : pre::export_cfg_dot(cfg), out);
    return 0;
}

int cmd_emit(const Options& o, std::ostream& out, bool smtlib)
{
    auto config = make_config(o);
    load_assertions(config);
    const auto prepared = prepare_model(load_stream(o, config), config);
    const auto system = optimized_system(prepared, config);
    emit(o, smtlib ? horn::emit_chc_smtlib(system, prepared.query) : horn::emit_horn_ir(system), out);
    return 0;
}

int cmd_regress(const Options& o, std::ostream& out)
{
    auto config = make_config(o);
    const auto result = run_regress(o.input, config);
    if (config.format == OutputFormat::Json)
    {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : result.rows)
        {
            rows.push_back({{"fixture", r.entry.name}, {"property", properties::to_string(r.entry.property)},
                {"engine", r.engine}, {"expected", r.entry.expected}, {"verdict", r.verdict}, {"ok", r.ok},
                {"wall_ms", r.wall_ms}, {"note", r.note}});
        }
        emit(o, nlohmann::json{{"ok", result.ok()}, {"wall_ms", result.wall_ms}, {"rows", rows}}.dump(2) + "\n", out);
    }
    else
    {
        emit(o, regress_table(result), out);
    }
    return result.ok() ? 0 : exit_analysis_error;
}

int cmd_minitest(const Options& o, std::ostream& out)
{
    const auto config = make_config(o);
    const auto summary = oracle::run_minitests(o.input);
    if (summary.results.empty())
        throw std::invalid_argument("no minitest cases in " + o.input);
    if (config.format == OutputFormat::Json)
    {
        emit(o, summary.to_json().dump(2) + "\n", out);
    }
    else
    {
        std::ostringstream text;
        for (const auto& r : summary.results)
        {
            if (r.status == oracle::MinitestResult::Status::Passed)
                continue;
            text << (r.status == oracle::MinitestResult::Status::Failed ? "FAIL " : "MALFORMED ") << r.file;
            if (!r.name.empty())
                text << " (" << r.name << ')';
            text << ": " << r.message << '\n';
        }
        text << summary.passed << " passed, " << summary.failed << " failed, " << summary.malformed
             << " malformed\n";
        emit(o, text.str(), out);
    }
    return summary.ok() ? 0 : exit_analysis_error;
}
}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Sound single-entrancy and reachability analysis for EVM bytecode", "evmhorn"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with option defaults; command-line flags win");

    app.add_option("--property", o.property, "single-entrancy | store-after-call | assertion")
        ->check(CLI::IsMember({"single-entrancy", "store-after-call", "assertion"}));
    app.add_flag("--count-selfdestruct,!--no-count-selfdestruct", o.count_selfdestruct,
        "Treat SELFDESTRUCT as an internal transaction")
        ->default_str("off");
    app.add_flag("--count-staticcall,!--no-count-staticcall", o.count_staticcall,
        "Treat STATICCALL as an internal transaction")
        ->default_str("on");
    app.add_option("--assertions", o.assertions, "Assertion sidecar file for --property assertion");
    app.add_option("--engine", o.engine, "internal | external")->check(CLI::IsMember({"internal", "external"}));
    app.add_option("--solver", o.solver, "External CHC solver command; the .smt2 path is appended");
    app.add_option("--timeout", o.timeout, "External solver timeout in seconds")->check(CLI::PositiveNumber);
    app.add_option("-K,--value-set-cap", o.value_set_cap, "Preanalysis value-set size cap")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-heights", o.max_heights, "Distinct stack heights per pc")->check(CLI::PositiveNumber);
    app.add_option("-W,--widening", o.widening, "Internal engine widening threshold")->check(CLI::PositiveNumber);
    app.add_option("--opcode-table", o.opcode_table, "constantinople | istanbul | shanghai");
    app.add_option("--format", o.format, "text | json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--passes", o.passes, "Comma-separated optimization passes, or 'none'");
    app.add_option("-o,--output", o.output, "Write the artifact to this file instead of stdout");

    std::map<std::string, std::function<int()>> actions;
    auto sub = [&](const std::string& name, const std::string& help, const std::string& what,
                   std::function<int()> action) {
        auto* cmd = app.add_subcommand(name, help);
        cmd->add_option("input", o.input, what)->required();
        actions[name] = std::move(action);
    };
    sub("analyze", "Run the full pipeline and report a verdict", "Bytecode file (hex text or binary)",
        [&] { return cmd_analyze(o, out); });
    sub("disasm", "Print the instruction listing", "Bytecode file", [&] { return cmd_disasm(o, out); });
    sub("cfg", "Print the reconstructed CFG (DOT, or JSON with --format json)", "Bytecode file",
        [&] { return cmd_cfg(o, out); });
    sub("emit-chc", "Print the SMT-LIB HORN encoding of the query", "Bytecode file",
        [&] { return cmd_emit(o, out, true); });
    sub("emit-ir", "Print the textual Horn IR", "Bytecode file", [&] { return cmd_emit(o, out, false); });
    sub("regress", "Check a corpus against its manifest", "Corpus directory", [&] { return cmd_regress(o, out); });
    sub("minitest", "Run the mini-interpreter test cases", "Directory of JSON cases",
        [&] { return cmd_minitest(o, out); });

    std::vector<std::string> argv_storage{"evmhorn"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage)
        argv.push_back(a.c_str());
    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : exit_usage;
    }

    try
    {
        return actions.at(app.get_subcommands().front()->get_name())();
    }
    catch (const AnalysisError& e)
    {
        return report_analysis_error(e, err);
    }
    catch (const evm::DecodeError& e)
    {
        err << "error: " << format({DiagnosticKind::DecodeError, e.offset(), e.what()}) << '\n';
        return exit_analysis_error;
    }
    catch (const ConfigError& e)
    {
        err << "configuration error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

}  // namespace evmhorn::cli
