// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evmhorn/horn/optimize.hpp"
#include "evmhorn/properties/properties.hpp"

namespace evmhorn::cli
{
enum class Engine : uint8_t
{
    Internal,
    External,
};

enum class OutputFormat : uint8_t
{
    Text,
    Json,
};

std::string_view to_string(Engine e) noexcept;

struct AnalysisConfig
{
    properties::PropertySpec property;
    /// Assertion sidecar; its contents are loaded into property.assertions.
    std::optional<std::filesystem::path> assertions_file;
    Engine engine = Engine::Internal;
    /// Program and arguments; the SMT-LIB file path is appended.
    std::string solver_command;
    unsigned timeout_seconds = 600;
    size_t value_set_cap = 32;
    size_t max_heights = 16;
    size_t widening = 16;
    evm::OpcodeTable opcode_table = evm::OpcodeTable::Constantinople;
    OutputFormat format = OutputFormat::Text;
    std::vector<horn::Pass> passes = horn::default_passes();

    /// Throws ConfigError for non-positive knobs or an external engine without
    /// a solver command.
    void validate() const;
};

/// Exit codes of the command-line tool.
inline constexpr int exit_secure = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_analysis_error = 2;
inline constexpr int exit_insecure = 10;
inline constexpr int exit_unknown = 20;

struct ReportStats
{
    size_t instructions = 0;
    size_t blocks = 0;
    size_t predicates = 0;
    size_t clauses = 0;
    size_t facts = 0;
    double solver_ms = 0;
    double wall_ms = 0;
};

struct Report
{
    std::string input;
    std::string code_hash;
    std::string property;
    /// "secure", "insecure", "unknown" or "error".
    std::string verdict;
    std::string engine;
    std::string detail;
    ReportStats stats;
    std::vector<Diagnostic> diagnostics;
    std::optional<horn::Witness> witness;
};

inline constexpr std::string_view report_schema = "evmhorn-report/1";

int exit_code(const Report& report);

/// Schema-stable JSON. Timing fields are omitted when `timing` is false.
nlohmann::json report_to_json(const Report& report, bool timing = true);
std::string report_to_text(const Report& report);

/// Decoded stream, preanalysis and translated model with the query added.
struct PreparedModel
{
    abssem::ContractModel model;
    std::string query;
    std::vector<Diagnostic> diagnostics;
};

/// Throws AnalysisError for preanalysis failures and ConfigError for
/// assertions that name state parts the target states lack.
PreparedModel prepare_model(const evm::InstructionStream& stream, const AnalysisConfig& config);

/// The prepared system after the configured optimization passes.
horn::HornSystem optimized_system(const PreparedModel& prepared, const AnalysisConfig& config);

/// Runs the whole pipeline on code bytes. Analysis failures produce an
/// "error" report; configuration problems throw ConfigError.
Report analyze_code(const Bytes& code, const std::string& input, const AnalysisConfig& config);

/// Loads hex text or raw binary from `path` (std::runtime_error on IO failure)
/// and analyzes it. Malformed hex yields an "error" report.
Report analyze_file(const std::filesystem::path& path, const AnalysisConfig& config);

/// Reads the assertion sidecar into config.property.assertions, if one is set.
void load_assertions(AnalysisConfig& config);

/// One regression fixture: "<name> <property> <expected-verdict>".
struct ManifestEntry
{
    std::string name;
    properties::PropertyKind property = properties::PropertyKind::SingleEntrancy;
    std::string expected;
    size_t line = 0;
};

/// Throws std::invalid_argument naming the line on malformed manifests.
std::vector<ManifestEntry> parse_manifest(std::string_view text);

struct RegressRow
{
    ManifestEntry entry;
    std::string engine;
    std::string verdict;
    double wall_ms = 0;
    bool ok = false;
    std::string note;
};

struct RegressResult
{
    std::vector<RegressRow> rows;
    double wall_ms = 0;
    bool ok() const;
};

/// Runs every manifest fixture with the internal engine and, when
/// `config.solver_command` is set, with the external solver too.
/// Throws std::invalid_argument for a missing or empty corpus.
RegressResult run_regress(const std::filesystem::path& corpus, const AnalysisConfig& config);

std::string regress_table(const RegressResult& result);

}  // namespace evmhorn::cli
