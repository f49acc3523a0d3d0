#pragma once

// Data-parallel kernels over many formulas. Each has a `parallel` switch; the
// serial path runs the same per-item code in order, and results never depend
// on the thread count.

#include <span>
#include <vector>

#include "stratum/prove.hpp"
#include "stratum/stratify.hpp"

namespace stratum {

std::vector<Formula> stratify_batch(std::span<const Formula> formulas, const StratifierSpec& x, bool parallel = true);
std::vector<Formula> destratify_batch(std::span<const Formula> formulas, bool parallel = true);

/// Pairs (formula, spec) with destratify(stratify(f, x)) != f.
std::size_t round_trip_failures(std::span<const Formula> formulas, std::span<const StratifierSpec> specs,
                                bool parallel = true);

/// prove_bounded on each formula.
std::vector<ProofReport> prove_batch(std::span<const Formula> formulas, const Budget& budget, bool parallel = true);

namespace reference {

/// reference::stratify applied in order.
std::vector<Formula> stratify_batch(std::span<const Formula> formulas, const StratifierSpec& x);

}  // namespace reference

}  // namespace stratum
