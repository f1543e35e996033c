#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace ccd {

/// Coupled three-point stencil determining first and second derivatives
/// simultaneously. Row one (first derivative):
///
///   D_i + alpha1 (D_{i+1} + D_{i-1}) + gamma1 h (D2_{i+1} - D2_{i-1})
///     = (1/h) sum_k r1[k-1] (u_{i+k} - u_{i-k})
///
/// Row two (second derivative):
///
///   D2_i + (alpha2/h)(D_{i+1} - D_{i-1}) + gamma2 (D2_{i+1} + D2_{i-1})
///     = (1/h^2) [ s0 u_i + s1 (u_{i+1} + u_{i-1}) + s2 (u_{i+2} +/- u_{i-2}) ]
///
/// The +/- is controlled by s2_antisymmetric: the eighth-order scheme as
/// published carries the i+/-2 term with a minus sign, which breaks
/// constant annihilation (see build_ccd8).
struct CombinedStencil {
    int order = 0;
    double alpha1 = 0.0;
    double gamma1 = 0.0;
    std::vector<double> r1;
    double alpha2 = 0.0;
    double gamma2 = 0.0;
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    bool s2_antisymmetric = false;

    /// Nodes of exact boundary data needed at each end by the widest RHS term.
    std::size_t boundary_width() const {
        return (r1.size() >= 2 || s2 != 0.0) ? 2 : 1;
    }

    /// Defect of the second-derivative row on constant input; zero for a
    /// consistent scheme.
    double constant_annihilation_defect() const {
        return s0 + 2.0 * s1 + (s2_antisymmetric ? 0.0 : 2.0 * s2);
    }
};

/// Sixth-order combined stencil of the three-point family.
CombinedStencil build_ccd6();

/// Eighth-order combined stencil. `corrected = false` reproduces the
/// published coefficients verbatim, including the antisymmetric
/// -(1/108 h^2)(u_{i+2} - u_{i-2}) term whose second row fails to annihilate
/// constants by 1/54. `corrected = true` applies the minimal repair: the same
/// s2 = -1/108 taken symmetrically, restoring s0 + 2 s1 + 2 s2 = 0 and
/// eighth-order accuracy of both rows.
CombinedStencil build_ccd8(bool corrected);

using ScalarFn = std::function<double(double)>;

/// Substitutes exact values of u, u', u'' into both stencil rows at node x
/// and returns (LHS - RHS) for the first- and second-derivative rows.
std::pair<double, double> stencil_residual(const CombinedStencil& stencil, const ScalarFn& u,
                                           const ScalarFn& du, const ScalarFn& d2u, double x,
                                           double h);

}  // namespace ccd
