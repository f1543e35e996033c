#pragma once

#include "ccd/grid.hpp"
#include "ccd/stencil.hpp"

namespace ccd {

/// Exact derivative values at the boundary band consumed by solve_combined.
/// `left[j]` belongs to node j, `right[j]` to node N-1-j; each vector must
/// have exactly stencil.boundary_width() entries.
struct ExactBoundary {
    std::vector<double> first_left;
    std::vector<double> second_left;
    std::vector<double> first_right;
    std::vector<double> second_right;
};

/// Solves the coupled first/second-derivative system of the combined stencil
/// on a non-periodic grid. The band of boundary_width() nodes at each end is
/// taken from `bc`; every interior node satisfies its stencil rows. The
/// elimination works on 2x2 blocks after scaling the first-derivative rows by
/// h and the second-derivative rows by h^2.
DerivativePair solve_combined(const CombinedStencil& stencil, const GridFunction& g,
                              const ExactBoundary& bc);

/// Periodic variant: u is treated as samples of a periodic function on
/// [x0, x0 + N h); every node satisfies its stencil rows with wraparound
/// indexing. Solved by block elimination condensed on the last node.
DerivativePair solve_combined_periodic(const CombinedStencil& stencil, const GridFunction& g);

}  // namespace ccd
