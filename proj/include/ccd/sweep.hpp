#pragma once

#include <optional>
#include <utility>

#include "ccd/grid.hpp"
#include "ccd/weights.hpp"

namespace ccd {

enum class SeedMode { exact, biased };

/// How a sweep is started and finished. `d1`/`d2` seed the terminal node
/// (the last node for a forward sweep, the first for a backward one) and are
/// only read in exact mode; biased mode seeds with explicit one-sided
/// fourth-order differences instead. The far end of the recursion references
/// one value outside the grid; by default that node is closed with a shifted
/// biased three-point evaluation, unless `edge` supplies values for it.
///
/// Exact seed values are the BIASED OPERATOR's derivatives at the terminal
/// node, not the true derivatives of u: each one-sided operator carries a
/// contribution (a first-derivative component of size 1/h inside D2) that
/// only the forward/backward average cancels. Seeding with true derivatives
/// is permitted but plants an O(1) deviation that decays like rho^k away
/// from the seed.
struct BoundarySeed {
    SeedMode mode = SeedMode::biased;
    double d1 = 0.0;
    double d2 = 0.0;
    std::optional<std::pair<double, double>> edge;
};

/// One biased operator's derivative estimates over the whole grid.
struct SweepResult {
    std::vector<double> first;
    std::vector<double> second;
};

/// Evaluates the forward operator pair by the explicit right-to-left
/// recursion. Requires forward weights and N >= 3 (N >= 6 for biased seeds).
SweepResult forward_sweep(const PrefactoredWeights& wts, const GridFunction& g,
                          const BoundarySeed& seed);

/// Mirror image: seeds the first node and sweeps left to right with backward
/// weights.
SweepResult backward_sweep(const PrefactoredWeights& wts, const GridFunction& g,
                           const BoundarySeed& seed);

/// Average of the two biased operators; recovers the combined scheme.
DerivativePair combine(const SweepResult& fwd, const SweepResult& bwd);

/// Empirical contraction factor of the sweep recursion: runs the sweep on
/// u == 0 with unit seed values and measures the per-step decay away from
/// the seed. A value >= 1 marks weights whose sweep amplifies seed error.
double sweep_growth_rate(const PrefactoredWeights& wts, std::size_t n = 64);

}  // namespace ccd
