#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ccd/stencil.hpp"
#include "ccd/weights.hpp"

namespace ccd {

enum class SchemeId { ccd6, ccd8 };
enum class DerivativeKind { first, second };

/// Numerical wavenumbers of one operator at scaled wavenumber w:
/// (re, im) parts of w' and of (w'')^2. Centered schemes have zero
/// imaginary parts; biased operators do not.
struct SymbolSample {
    double w = 0.0;
    double re_wp = 0.0;
    double im_wp = 0.0;
    double re_wpp2 = 0.0;
    double im_wpp2 = 0.0;
};

/// Coefficients of the rational symbol representation
///   Re w'      = sin w (fI . chi3) / (g . chi3)
///   Re (w'')^2 =       (fII . chi4) / (g . chi3)
/// with chi3 = (1, cos w, cos 2w) and chi4 = (1, cos w, cos 2w, cos 3w),
/// normalized so that g1 + g2 + g3 = 70/36. `scale` records the factor
/// applied to the raw fitted vector (its sign fixes the empirical sign
/// convention).
struct RationalSymbolForm {
    std::array<double, 3> fI{};
    std::array<double, 3> g{};
    std::array<double, 4> fII{};
    double scale = 1.0;
};

/// Closed-form modified wavenumbers exactly as published for the two
/// combined schemes. For kind == second the value is (w'')^2 in the
/// sixth-order case; the eighth-order second-kind expression is evaluated
/// literally as printed (it is inconsistent: nonzero at w = 0) and is kept
/// only to document that fact.
double printed_symbol(SchemeId scheme, DerivativeKind kind, double w);

/// Modified wavenumbers of a combined stencil from first principles: applies
/// the Fourier substitution to both stencil rows and solves the resulting
/// 2x2 system for (w', (w'')^2). Imaginary parts are zero for symmetric
/// stencils; the antisymmetric published eighth-order RHS gives the second
/// symbol an imaginary component, which is returned as-is.
SymbolSample combined_symbol_oracle(const CombinedStencil& stencil, double w);

/// Modified wavenumbers of one biased operator: assembles the 4x4 real
/// system in (Re w', Im w', Re (w'')^2, Im (w'')^2) and solves it with
/// partial pivoting after row equilibration. Throws SingularSystemError
/// (message carries w and the determinant estimate) if the scaled
/// determinant magnitude falls below 1e-12. Backward weights use the
/// reflected system.
SymbolSample prefactored_symbol(const PrefactoredWeights& wts, double w);

/// Batch evaluation over a wavenumber grid. The samples are independent, so
/// the loop runs under OpenMP when `parallel` is true; results are identical
/// to the serial reference either way.
std::vector<SymbolSample> sample_prefactored(const PrefactoredWeights& wts,
                                             std::span<const double> wgrid, bool parallel = true);
std::vector<SymbolSample> sample_oracle(const CombinedStencil& stencil,
                                        std::span<const double> wgrid, bool parallel = true);

/// n Chebyshev-spaced points in (0, pi), avoiding both endpoints.
std::vector<double> chebyshev_wgrid(std::size_t n);

/// n midpoint-uniform points in (0, pi); disjoint from the Chebyshev grid.
std::vector<double> midpoint_wgrid(std::size_t n);

/// Fits the rational symbol form to >= 12 samples of the operator's real
/// symbol parts (least squares on the homogeneous cross-multiplied system,
/// smallest eigenvector of the normal matrix). Throws std::runtime_error
/// naming the singular-value gap when the fit is rank deficient (degenerate
/// weights), or when the fitted form fails to reproduce the samples to 1e-9
/// relative.
RationalSymbolForm extract_rational_form(const PrefactoredWeights& wts);

}  // namespace ccd
