// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evmhorn/pre/value_set.hpp"

#include <algorithm>

namespace evmhorn::pre
{
ValueSet ValueSet::of(std::vector<Word> values, size_t cap)
{
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.size() > cap)
        return top();
    ValueSet v;
    v.values_ = std::move(values);
    return v;
}

std::optional<Word> ValueSet::singleton() const
{
    if (!top_ && values_.size() == 1)
        return values_.front();
    return std::nullopt;
}

bool ValueSet::may_be_zero() const
{
    return top_ || (!values_.empty() && values_.front() == 0);
}

bool ValueSet::may_be_nonzero() const
{
    return top_ || (!values_.empty() && values_.back() != 0);
}

ValueSet ValueSet::join(const ValueSet& other, size_t cap) const
{
    if (top_ || other.top_)
        return top();
    std::vector<Word> merged;
    merged.reserve(values_.size() + other.values_.size());
    std::set_union(values_.begin(), values_.end(), other.values_.begin(), other.values_.end(),
        std::back_inserter(merged));
    if (merged.size() > cap)
        return top();
    ValueSet v;
    v.values_ = std::move(merged);
    return v;
}

std::string ValueSet::str() const
{
    if (top_)
        return "top";
    std::string out = "{";
    for (size_t i = 0; i < values_.size(); ++i)
    {
        if (i > 0)
            out += ",";
        out += to_hex(values_[i]);
    }
    return out + "}";
}

ValueSet apply(OpKind op, std::span<const ValueSet> args, size_t cap)
{
    size_t combinations = 1;
    for (const auto& a : args)
    {
        if (a.is_top())
            return ValueSet::top();
        if (a.is_bottom())
            return ValueSet{};
        combinations *= a.values().size();
        if (combinations > cap * cap * cap + 1)
            return ValueSet::top();
    }

    std::vector<Word> results;
    std::vector<Word> operands(args.size());
    std::vector<size_t> cursor(args.size(), 0);
    for (;;)
    {
        for (size_t i = 0; i < args.size(); ++i)
            operands[i] = args[i].values()[cursor[i]];
        results.push_back(apply_op(op, operands));

        size_t i = 0;
        while (i < args.size() && ++cursor[i] == args[i].values().size())
            cursor[i++] = 0;
        if (i == args.size())
            break;
    }
    return ValueSet::of(std::move(results), cap);
}

}  // namespace evmhorn::pre
