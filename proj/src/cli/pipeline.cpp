// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/cli/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "evmhorn/horn/external.hpp"
#include "evmhorn/horn/smtlib.hpp"
#include "evmhorn/keccak.hpp"

namespace evmhorn::cli
{
using nlohmann::json;
using properties::PropertyKind;

namespace
{
double elapsed_ms(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json diagnostic_json(const Diagnostic& d)
{
    return {{"kind", to_string(d.kind)}, {"pc", d.pc ? json(*d.pc) : json(nullptr)}, {"message", d.message}};
}

json witness_json(const horn::Witness& w)
{
    json steps = json::array();
    for (const auto& s : w)
    {
        json args = json::array();
        for (const auto& a : s.args)
            args.push_back(a.str());
        steps.push_back({{"kind", s.kind == horn::WitnessStep::Kind::Clause ? "clause" : "widen"},
            {"clause", s.clause}, {"label", s.label}, {"pred", s.pred.empty() ? json(nullptr) : json(s.pred)},
            {"args", std::move(args)}});
    }
    return steps;
}

std::string engine_name(const AnalysisConfig& config)
{
    return config.engine == Engine::Internal ? "internal" : horn::parse_solver_command(config.solver_command).program;
}

std::string fixed(double v)
{
    std::ostringstream out;
    out << std::fixed << std::setprecision(1) << v;
    return out.str();
}
}  // namespace

std::string_view to_string(Engine e) noexcept
{
    return e == Engine::Internal ? "internal" : "external";
}

void AnalysisConfig::validate() const
{
    if (timeout_seconds == 0)
        throw ConfigError("timeout must be positive");
    if (value_set_cap == 0)
        throw ConfigError("value-set cap (K) must be positive");
    if (max_heights == 0)
        throw ConfigError("max heights (H_max) must be positive");
    if (widening == 0)
        throw ConfigError("widening threshold (W) must be positive");
    if (engine == Engine::External && solver_command.empty())
        throw ConfigError("the external engine needs a solver command");
    if (property.kind == PropertyKind::Assertion && !assertions_file && property.assertions.empty())
        throw ConfigError("the assertion property needs an assertions file");
}

int exit_code(const Report& report)
{
    if (report.verdict == "secure")
        return exit_secure;
    if (report.verdict == "insecure")
        return exit_insecure;
    if (report.verdict == "unknown")
        return exit_unknown;
    return exit_analysis_error;
}

json report_to_json(const Report& report, bool timing)
{
    json stats = {{"instructions", report.stats.instructions}, {"blocks", report.stats.blocks},
        {"predicates", report.stats.predicates}, {"clauses", report.stats.clauses}, {"facts", report.stats.facts}};
    if (timing)
    {
        stats["solver_ms"] = report.stats.solver_ms;
        stats["wall_ms"] = report.stats.wall_ms;
    }
    json diags = json::array();
    for (const auto& d : report.diagnostics)
        diags.push_back(diagnostic_json(d));
    return {{"schema", report_schema}, {"contract", {{"input", report.input}, {"code_hash", report.code_hash}}},
        {"property", report.property}, {"verdict", report.verdict}, {"engine", report.engine},
        {"detail", report.detail}, {"stats", std::move(stats)}, {"diagnostics", std::move(diags)},
        {"witness", report.witness ? witness_json(*report.witness) : json(nullptr)}};
}

std::string report_to_text(const Report& report)
{
    std::ostringstream out;
    out << "input:     " << report.input << '\n';
    out << "code hash: " << report.code_hash << '\n';
    out << "property:  " << report.property << '\n';
    out << "verdict:   " << report.verdict;
    if (report.verdict == "insecure")
        out << " (cannot prove secure)";
    out << '\n';
    out << "engine:    " << report.engine << '\n';
    if (!report.detail.empty())
        out << "detail:    " << report.detail << '\n';
    const auto& s = report.stats;
    out << "stats:     instructions=" << s.instructions << " blocks=" << s.blocks << " predicates=" << s.predicates
        << " clauses=" << s.clauses << " facts=" << s.facts << " solver_ms=" << fixed(s.solver_ms)
        << " wall_ms=" << fixed(s.wall_ms) << '\n';
    for (const auto& d : report.diagnostics)
        out << "diagnostic: " << format(d) << '\n';
    if (report.witness)
    {
        out << "witness:\n";
        size_t n = 0;
        for (const auto& step : *report.witness)
        {
            out << "  " << ++n << ". ";
            if (step.kind == horn::WitnessStep::Kind::Widen)
                out << "widen ";
            else
                out << '[' << step.label << "] ";
            if (step.pred.empty())
            {
                out << "goal\n";
                continue;
            }
            out << step.pred << '(';
            for (size_t i = 0; i < step.args.size(); ++i)
                out << (i ? ", " : "") << step.args[i].str();
            out << ")\n";
        }
    }
    return out.str();
}

void load_assertions(AnalysisConfig& config)
{
    if (!config.assertions_file)
        return;
    std::string text;
    try
    {
        text = read_text(*config.assertions_file);
    }
    catch (const std::runtime_error& e)
    {
        throw ConfigError(e.what());
    }
    try
    {
        config.property.assertions = properties::parse_assertions(text);
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(config.assertions_file->string() + ": " + e.what());
    }
}

PreparedModel prepare_model(const evm::InstructionStream& stream, const AnalysisConfig& config)
{
    pre::PreanalysisConfig pc;
    pc.value_set_cap = config.value_set_cap;
    pc.max_heights = config.max_heights;
    PreparedModel out{abssem::translate_contract(pre::run_preanalysis(stream, pc)), {}, {}};
    try
    {
        out.query = properties::add_query(out.model, config.property, out.diagnostics);
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(e.what());
    }
    return out;
}

horn::HornSystem optimized_system(const PreparedModel& prepared, const AnalysisConfig& config)
{
    return horn::optimize(prepared.model.system, config.passes);
}

Report analyze_code(const Bytes& code, const std::string& input, const AnalysisConfig& given)
{
    given.validate();
    AnalysisConfig config = given;
    load_assertions(config);
    const auto start = std::chrono::steady_clock::now();
    Report r;
    r.input = input;
    r.code_hash = bytes_to_hex(keccak256(code));
    r.property = std::string{properties::to_string(config.property.kind)};
    r.engine = engine_name(config);

    const auto stream = evm::decode_bytecode(code, config.opcode_table);
    r.stats.instructions = stream.instructions().size();
    r.stats.blocks = evm::split_basic_blocks(stream).blocks.size();
    try
    {
        auto prepared = prepare_model(stream, config);
        r.diagnostics = prepared.model.cfg.diagnostics;
        r.diagnostics.insert(r.diagnostics.end(), prepared.diagnostics.begin(), prepared.diagnostics.end());
        const auto system = optimized_system(prepared, config);
        const auto st = horn::stats(system);
        r.stats.predicates = st.predicates;
        r.stats.clauses = st.clauses;

        horn::SolverVerdict sv;
        if (config.engine == Engine::Internal)
        {
            sv = horn::solve_internal(system, prepared.query, config.widening);
        }
        else
        {
            sv = horn::solve_external(horn::emit_chc_smtlib(system, prepared.query),
                horn::parse_solver_command(config.solver_command), std::chrono::seconds{config.timeout_seconds});
        }
        if (sv.outcome == horn::Outcome::Unknown)
            r.diagnostics.push_back({DiagnosticKind::SolverFailure, std::nullopt, sv.detail});
        const auto verdict = properties::interpret_verdict(std::move(sv), config.property.kind);
        r.verdict = std::string{properties::to_string(verdict.verdict)};
        r.detail = verdict.solver.detail;
        r.stats.facts = verdict.solver.facts;
        r.stats.solver_ms = verdict.solver.wall_ms;
        r.witness = verdict.solver.witness;
    }
    catch (const AnalysisError& e)
    {
        r.verdict = "error";
        r.detail = e.what();
        r.diagnostics.insert(r.diagnostics.end(), e.diagnostics().begin(), e.diagnostics().end());
    }
    r.stats.wall_ms = elapsed_ms(start);
    return r;
}

Report analyze_file(const std::filesystem::path& path, const AnalysisConfig& config)
{
    Bytes code;
    try
    {
        code = evm::load_code_file(path);
    }
    catch (const evm::DecodeError& e)
    {
        config.validate();
        Report r;
        r.input = path.string();
        r.property = std::string{properties::to_string(config.property.kind)};
        r.engine = engine_name(config);
        r.verdict = "error";
        r.detail = e.what();
        r.diagnostics.push_back({DiagnosticKind::DecodeError, e.offset(), e.what()});
        return r;
    }
    return analyze_code(code, path.string(), config);
}

std::vector<ManifestEntry> parse_manifest(std::string_view text)
{
    std::vector<ManifestEntry> out;
    std::istringstream lines{std::string{text}};
    std::string line;
    size_t n = 0;
    while (std::getline(lines, line))
    {
        ++n;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream words{line};
        std::string name, property, expected, extra;
        if (!(words >> name))
            continue;
        if (!(words >> property >> expected) || (words >> extra))
            throw std::invalid_argument("manifest line " + std::to_string(n) + ": expected 'name property verdict'");
        const auto kind = properties::parse_property(property);
        if (!kind)
            throw std::invalid_argument("manifest line " + std::to_string(n) + ": unknown property '" + property + "'");
        if (expected != "secure" && expected != "insecure" && expected != "unknown" && expected != "error")
            throw std::invalid_argument("manifest line " + std::to_string(n) + ": unknown verdict '" + expected + "'");
        out.push_back({name, *kind, expected, n});
    }
    return out;
}

bool RegressResult::ok() const
{
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const RegressRow& r) { return r.ok; });
}

RegressResult run_regress(const std::filesystem::path& corpus, const AnalysisConfig& config)
{
    const auto manifest_path = corpus / "manifest.txt";
    if (!std::filesystem::is_directory(corpus) || !std::filesystem::exists(manifest_path))
        throw std::invalid_argument("no corpus manifest at " + manifest_path.string());
    const auto entries = parse_manifest(read_text(manifest_path));
    if (entries.empty())
        throw std::invalid_argument("empty corpus manifest " + manifest_path.string());

    const auto start = std::chrono::steady_clock::now();
    RegressResult result;
    std::vector<Engine> engines{Engine::Internal};
    if (!config.solver_command.empty())
        engines.push_back(Engine::External);
    for (const auto& entry : entries)
    {
        std::string internal_verdict;
        for (const auto engine : engines)
        {
            AnalysisConfig c = config;
            c.engine = engine;
            c.property = {};
            c.property.kind = entry.property;
            c.property.count_staticcall = config.property.count_staticcall;
            c.property.count_selfdestruct = config.property.count_selfdestruct;
            c.assertions_file.reset();
            RegressRow row;
            row.entry = entry;
            row.engine = engine == Engine::Internal ? "internal" : "external";
            try
            {
                if (entry.property == PropertyKind::Assertion)
                {
                    c.assertions_file = corpus / (entry.name + ".assert");
                    load_assertions(c);
                }
                const auto report = analyze_file(corpus / (entry.name + ".hex"), c);
                row.verdict = report.verdict;
                row.wall_ms = report.stats.wall_ms;
                row.ok = report.verdict == entry.expected;
                if (!row.ok)
                    row.note = "expected " + entry.expected;
                if (engine == Engine::Internal)
                {
                    internal_verdict = report.verdict;
                }
                else if (internal_verdict == "secure" && report.verdict != "secure")
                {
                    row.ok = false;
                    row.note = "internal secure but external " + report.verdict;
                }
            }
            catch (const std::exception& e)
            {
                row.verdict = "error";
                row.ok = false;
                row.note = e.what();
            }
            result.rows.push_back(std::move(row));
        }
    }
    result.wall_ms = elapsed_ms(start);
    return result;
}

std::string regress_table(const RegressResult& result)
{
    std::ostringstream out;
    out << std::left << std::setw(18) << "fixture" << std::setw(18) << "property" << std::setw(10) << "engine"
        << std::setw(10) << "expected" << std::setw(10) << "verdict" << std::right << std::setw(10) << "ms"
        << "  status\n";
    size_t failed = 0;
    for (const auto& r : result.rows)
    {
        out << std::left << std::setw(18) << r.entry.name << std::setw(18) << properties::to_string(r.entry.property)
            << std::setw(10) << r.engine << std::setw(10) << r.entry.expected << std::setw(10) << r.verdict
            << std::right << std::setw(10) << fixed(r.wall_ms) << "  " << (r.ok ? "ok" : "FAIL");
        if (!r.note.empty())
            out << " (" << r.note << ')';
        out << '\n';
        failed += r.ok ? 0 : 1;
    }
    out << result.rows.size() - failed << '/' << result.rows.size() << " expectations met in "
        << fixed(result.wall_ms) << " ms\n";
    return out.str();
}

}  // namespace evmhorn::cli
