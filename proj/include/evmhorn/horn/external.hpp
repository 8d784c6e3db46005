// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "evmhorn/horn/fixpoint.hpp"

namespace evmhorn::horn
{
struct SolverCommand
{
    /// Executable path or name looked up in PATH.
    std::string program;
    /// Extra arguments; the SMT-LIB file path is appended last.
    std::vector<std::string> args;
};

/// Splits a shell-like command line on whitespace.
SolverCommand parse_solver_command(const std::string& command_line);

/// Runs the solver on the document with a wall-clock limit. sat maps to
/// QueryUnreachable, unsat to QueryReachable; unknown, timeout, crash and
/// unreadable output map to Unknown with a detail message. Throws ConfigError
/// when the executable cannot be found.
SolverVerdict solve_external(const std::string& smtlib, const SolverCommand& command,
    std::chrono::seconds timeout = std::chrono::seconds{600});

/// Maps the first line of solver output ("sat", "unsat", ...).
Outcome map_solver_answer(const std::string& output);

}  // namespace evmhorn::horn
