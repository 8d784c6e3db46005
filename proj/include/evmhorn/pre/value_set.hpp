// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evmhorn/word.hpp"
#include "evmhorn/word_ops.hpp"

namespace evmhorn::pre
{
/// A finite set of word constants, or Top. Sets larger than the configured
/// cap collapse to Top. The empty set is bottom and only appears transiently.
class ValueSet
{
public:
    ValueSet() = default;

    static ValueSet top()
    {
        ValueSet v;
        v.top_ = true;
        return v;
    }
    static ValueSet of(Word w)
    {
        ValueSet v;
        v.values_.push_back(std::move(w));
        return v;
    }
    static ValueSet of(std::vector<Word> values, size_t cap);

    bool is_top() const noexcept { return top_; }
    bool is_bottom() const noexcept { return !top_ && values_.empty(); }
    /// Sorted, duplicate-free. Empty when Top.
    const std::vector<Word>& values() const noexcept { return values_; }
    std::optional<Word> singleton() const;

    bool may_be_zero() const;
    bool may_be_nonzero() const;

    /// Least upper bound with size cap.
    ValueSet join(const ValueSet& other, size_t cap) const;

    bool operator==(const ValueSet&) const = default;

    std::string str() const;

private:
    bool top_ = false;
    std::vector<Word> values_;
};

/// Pointwise application of a word operation; any Top operand yields Top.
ValueSet apply(OpKind op, std::span<const ValueSet> args, size_t cap);

}  // namespace evmhorn::pre
