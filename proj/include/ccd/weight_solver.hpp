#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ccd/linalg.hpp"
#include "ccd/spectral.hpp"
#include "ccd/stencil.hpp"
#include "ccd/weights.hpp"

namespace ccd {

/// Residual system evaluated at a set of forward weights.
using ResidualFn = std::function<std::vector<double>(const PrefactoredWeights&)>;

/// Outcome of one damped Newton / Gauss-Newton run.
struct SolveReport {
    PrefactoredWeights weights;
    double residual_norm = 0.0;  // infinity norm
    int iterations = 0;
    int start_index = 0;
    bool converged = false;
    double condition_estimate = 0.0;
};

/// Maxima over a wavenumber grid of the forward/backward symbol symmetry
/// defects and the mismatch against the target scheme's symbols.
struct ValidationReport {
    double re_gap_first = 0.0;     // |Re w'_F - Re w'_B|
    double im_sum_first = 0.0;     // |Im w'_F + Im w'_B|
    double target_gap_first = 0.0; // |Re w'_F - w'_target|
    double re_gap_second = 0.0;
    double im_sum_second = 0.0;
    double target_gap_second = 0.0;
    double avg_gap_first = 0.0;    // |(w'_F + w'_B)/2 - w'_target|
    double avg_gap_second = 0.0;

    double max_entry() const;
    bool passed(double tol = 1e-9) const { return max_entry() <= tol; }
};

/// The ten polynomial residuals (LHS - RHS) of the published closed system
/// for the eighth-order forward weights, transcribed verbatim.
std::array<double, 10> residuals_printed(const PrefactoredWeights& wts);

/// Spectral-matching residuals: for each w, the defects of the real symbol
/// parts against the target stencil's oracle symbols, followed by the two
/// constant-annihilation sums aI+bI+cI and aII+bII+cII.
std::vector<double> residuals_spectral(const PrefactoredWeights& wts,
                                       const CombinedStencil& target,
                                       std::span<const double> wgrid);

/// Residual callables for the solver. The spectral factory precomputes the
/// target symbols once; both closures are pure and safe to call concurrently.
ResidualFn make_printed_residual();
ResidualFn make_spectral_residual(const CombinedStencil& target, std::vector<double> wgrid);

/// Central-difference Jacobian of `resfn` at `wts`; per-coordinate step
/// step_scale * max(1, |w_j|). A residual failure at a perturbed point is
/// rethrown with the coordinate index in the message.
Matrix jacobian_fd(const ResidualFn& resfn, const PrefactoredWeights& wts,
                   double step_scale = 1e-7);

/// Damped Newton (square system) or Levenberg-Marquardt (overdetermined)
/// iteration: step from the linearized system, backtracking halving (at most
/// 30) until the 2-norm decreases, convergence on the residual infinity
/// norm. Reports the condition estimate of the final Jacobian.
SolveReport newton_solve(const ResidualFn& resfn, const PrefactoredWeights& start, double tol,
                         int max_iter);

struct MultistartResult {
    SolveReport best;
    std::vector<SolveReport> roots;  // deduplicated converged roots
};

/// Launches newton_solve from the all-zero start, a structured ansatz start,
/// and n_starts seeded uniform draws from [-1.5, 1.5]^10; deduplicates
/// converged roots at distance 1e-7, smallest residual first (ties by
/// condition estimate, then start index). Start points are generated up
/// front and results reduced in start order, so the outcome is independent
/// of execution order; the per-start loop runs under OpenMP when `parallel`
/// is set.
MultistartResult multistart(const ResidualFn& resfn, int n_starts, std::uint64_t seed,
                            double tol = 1e-12, int max_iter = 120, bool parallel = true);

/// Symbol-space validation of a forward/backward pair against the target
/// combined scheme. Every grid point must lie strictly inside (0, pi).
ValidationReport validate(const PrefactoredWeights& fwd, const PrefactoredWeights& bwd,
                          const CombinedStencil& target, std::span<const double> wgrid);

/// Spectral radius of the sweep recursion matrix [[betaI, thetaI],
/// [betaII, thetaII]]; the explicit sweeps are contractive iff < 1.
double sweep_spectral_radius(const PrefactoredWeights& wts);

/// Full pipeline for the spectral system: multistart, then per-root
/// validation on a fresh 128-point grid plus the admissibility filter
/// (constant Im sign, |cI| dominant among the first-row RHS weights,
/// contractive sweep recursion).
struct PrefactoredSolveResult {
    SolveReport best;
    PrefactoredWeights forward;
    PrefactoredWeights backward;
    ValidationReport validation;
    bool admissible = false;
    std::vector<SolveReport> roots;
};

PrefactoredSolveResult solve_spectral_weights(SchemeId target, int n_starts, std::uint64_t seed,
                                              double tol = 1e-12, int max_iter = 120,
                                              bool parallel = true);

}  // namespace ccd
