// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "evmhorn/horn/ir.hpp"

namespace evmhorn::horn
{
class HornParseError : public std::runtime_error
{
public:
    HornParseError(size_t line, size_t column, const std::string& what)
      : std::runtime_error{"line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                           what},
        line_{line},
        column_{column}
    {}

    size_t line() const noexcept { return line_; }
    size_t column() const noexcept { return column_; }

private:
    size_t line_;
    size_t column_;
};

/// Line-oriented textual form; see docs/horn-ir.md for the grammar.
std::string emit_horn_ir(const HornSystem& system);

HornSystem parse_horn_ir(std::string_view text);

std::string to_string(const Term& t);
std::string to_string(const LinExpr& e);
std::string to_string(const Guard& g);

}  // namespace evmhorn::horn
