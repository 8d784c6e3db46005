// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/diagnostics.hpp"

namespace evmhorn
{
std::string_view to_string(DiagnosticKind kind) noexcept
{
    switch (kind)
    {
    case DiagnosticKind::DecodeError:
        return "DecodeError";
    case DiagnosticKind::UnreconstructableControlFlow:
        return "UnreconstructableControlFlow";
    case DiagnosticKind::InvalidJumpTarget:
        return "InvalidJumpTarget";
    case DiagnosticKind::HeightOverflow:
        return "HeightOverflow";
    case DiagnosticKind::TrackedCellsCapped:
        return "TrackedCellsCapped";
    case DiagnosticKind::UnreachableTarget:
        return "UnreachableTarget";
    case DiagnosticKind::SolverFailure:
        return "SolverFailure";
    }
    return "Unknown";
}

bool is_error(DiagnosticKind kind) noexcept
{
    switch (kind)
    {
    case DiagnosticKind::DecodeError:
    case DiagnosticKind::UnreconstructableControlFlow:
    case DiagnosticKind::HeightOverflow:
        return true;
    default:
        return false;
    }
}

std::string format(const Diagnostic& d)
{
    std::string out{to_string(d.kind)};
    if (d.pc)
        out += "(" + std::to_string(*d.pc) + ")";
    if (!d.message.empty())
        out += ": " + d.message;
    return out;
}

namespace
{
std::string summarize(const std::vector<Diagnostic>& diagnostics)
{
    if (diagnostics.empty())
        return "analysis error";
    std::string out = format(diagnostics.front());
    if (diagnostics.size() > 1)
        out += " (+" + std::to_string(diagnostics.size() - 1) + " more)";
    return out;
}
}  // namespace

AnalysisError::AnalysisError(std::vector<Diagnostic> diagnostics)
  : std::runtime_error{summarize(diagnostics)}, diagnostics_{std::move(diagnostics)}
{}

}  // namespace evmhorn
