#pragma once

#include <cstddef>
#include <vector>

#include "ccd/spectral.hpp"
#include "ccd/weights.hpp"

namespace ccd {

enum class DiffMethod { combined, prefactored };
enum class TestFunction { sin_2pi, exp_unit, gauss_unit, constant_one };

/// An analytic test function with its domain of interest.
struct TestFunctionSpec {
    double x_begin = 0.0;
    double x_end = 1.0;
    double (*u)(double) = nullptr;
    double (*du)(double) = nullptr;
    double (*d2u)(double) = nullptr;
};

/// The fixed analytic test functions used by the studies.
TestFunctionSpec test_function(TestFunction fn);

struct ConvergenceRow {
    std::size_t n = 0;
    double h = 0.0;
    double err_first = 0.0;
    double err_second = 0.0;
};

/// Result of a grid-refinement study. Rows whose error is at or below the
/// roundoff guard (1e-12) are excluded from the least-squares slope fits;
/// `floor_limited_*` records that this happened and `fit_valid_*` goes false
/// when fewer than two rows survive (e.g. constant input).
struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double slope_first = 0.0;
    double slope_second = 0.0;
    bool fit_valid_first = false;
    bool fit_valid_second = false;
    bool floor_limited_first = false;
    bool floor_limited_second = false;
};

/// Runs the chosen differentiator with exact boundary data over the grid
/// sizes in `ns` (>= 3 entries, each >= 16) and fits convergence slopes on
/// log h vs log err. Errors are interior max-norms: the exact boundary band
/// is excluded for the combined solver and 3 nodes at each end for the
/// prefactored sweeps. For the sweeps, seed error is decoupled from the
/// interior measurement by extending the grid analytically well past both
/// ends (the biased operators' own values differ from the true derivatives
/// by a contribution that only the forward/backward average cancels, so no
/// boundary seed built from true derivatives is "exact" for a single
/// sweep). `method == prefactored` requires forward weights (solved
/// internally when absent).
ConvergenceStudy convergence_study(DiffMethod method, SchemeId scheme, TestFunction fn,
                                   const std::vector<std::size_t>& ns,
                                   const PrefactoredWeights* forward = nullptr);

/// Same study over a caller-supplied analytic function (must be valid on the
/// extended domain used for sweep seeding).
ConvergenceStudy convergence_study(DiffMethod method, SchemeId scheme,
                                   const TestFunctionSpec& fn,
                                   const std::vector<std::size_t>& ns,
                                   const PrefactoredWeights* forward = nullptr);

enum class SymbolSource { printed, oracle, prefactored };

struct DispersionRow {
    double w = 0.0;
    double re_wp = 0.0;
    double im_wp = 0.0;
    double re_wpp2 = 0.0;
    double im_wpp2 = 0.0;
    double exact_wp = 0.0;
    double exact_wpp2 = 0.0;
    double resolution_error = 0.0;  // |Re w' - w|
};

/// Samples one symbol source at nsamples uniformly spaced wavenumbers
/// j pi / nsamples, j = 1..nsamples. `source == prefactored` requires
/// weights.
std::vector<DispersionRow> dispersion_curve(SymbolSource source, SchemeId scheme,
                                            std::size_t nsamples,
                                            const PrefactoredWeights* wts = nullptr);

struct SymmetryReport {
    double max_re_gap = 0.0;  // worst |Re forward - Re backward| over both symbols
    double max_im_sum = 0.0;  // worst |Im forward + Im backward|
};

/// Forward/backward symbol symmetry maxima over nsamples (>= 16) interior
/// wavenumbers.
SymmetryReport symmetry_report(const PrefactoredWeights& fwd, const PrefactoredWeights& bwd,
                               std::size_t nsamples);

}  // namespace ccd
