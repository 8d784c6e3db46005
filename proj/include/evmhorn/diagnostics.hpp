// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evmhorn
{
enum class DiagnosticKind : uint8_t
{
    DecodeError,
    UnreconstructableControlFlow,
    InvalidJumpTarget,
    HeightOverflow,
    TrackedCellsCapped,
    UnreachableTarget,
    SolverFailure,
};

std::string_view to_string(DiagnosticKind kind) noexcept;

/// Kinds that abort the pipeline; the rest are informational.
bool is_error(DiagnosticKind kind) noexcept;

struct Diagnostic
{
    DiagnosticKind kind;
    std::optional<uint64_t> pc;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

std::string format(const Diagnostic& d);

/// Raised when an analysis stage cannot produce a sound result.
class AnalysisError : public std::runtime_error
{
public:
    explicit AnalysisError(std::vector<Diagnostic> diagnostics);

    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// Bad user configuration (missing solver, invalid knob, ...).
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

}  // namespace evmhorn
