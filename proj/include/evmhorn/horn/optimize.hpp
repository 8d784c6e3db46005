// evmhorn: sound reentrancy analysis for EVM bytecode
// Copyright 2026 The evmhorn Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "evmhorn/horn/ir.hpp"

namespace evmhorn::horn
{
enum class Pass : uint8_t
{
    ConstFold,
    PruneUnreachable,
    InlineLinear,
};

std::string_view to_string(Pass p) noexcept;
std::optional<Pass> parse_pass(std::string_view name) noexcept;

/// const-fold, prune-unreachable-predicates, inline-linear-predicates.
const std::vector<Pass>& default_passes();

struct InlineLimits
{
    size_t max_producers = 8;
    size_t max_term_size = 64;
};

/// Folds literal-only operations, lets Top absorb, drops guards that always
/// hold and clauses whose guards never hold.
HornSystem const_fold(const HornSystem& system);

/// Keeps predicates that are derivable from some fact and can reach some goal.
HornSystem prune_unreachable(const HornSystem& system);

/// Eliminates predicates with exactly one consuming clause by composing each
/// producer with that consumer.
HornSystem inline_linear(const HornSystem& system, const InlineLimits& limits = {});

HornSystem optimize(const HornSystem& system, std::span<const Pass> passes);

}  // namespace evmhorn::horn
