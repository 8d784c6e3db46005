// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evmhorn/oracle/interpreter.hpp"

namespace evmhorn::oracle
{
struct MinitestExpectation
{
    std::optional<HaltReason> halt;
    /// Stack when the halting instruction is reached, top first.
    std::optional<std::vector<Word>> stack;
    /// Final nonzero storage entries (all of them).
    std::optional<std::map<Word, Word>> storage;
    std::optional<Bytes> return_data;
    /// Memory contents when the halting instruction is reached.
    std::optional<Bytes> memory;
};

struct Minitest
{
    std::string name;
    Bytes code;
    EnvScript env;
    MinitestExpectation expected;
};

/// Parses one case object. Throws std::invalid_argument on malformed input.
Minitest parse_minitest(const nlohmann::json& j);

struct MinitestResult
{
    std::string file;
    std::string name;
    enum class Status : uint8_t
    {
        Passed,
        Failed,
        Malformed,
    } status = Status::Passed;
    /// Mismatch or parse error description; empty on success.
    std::string message;
};

struct MinitestSummary
{
    std::vector<MinitestResult> results;
    size_t passed = 0;
    size_t failed = 0;
    size_t malformed = 0;

    bool ok() const noexcept { return failed == 0 && malformed == 0 && passed > 0; }
    nlohmann::json to_json() const;
};

MinitestResult run_minitest(const Minitest& test);

/// Runs every *.json case in `dir` (sorted by file name). Malformed files are
/// recorded and the run continues. Throws std::invalid_argument when `dir`
/// is not a directory.
MinitestSummary run_minitests(const std::filesystem::path& dir);

}  // namespace evmhorn::oracle
