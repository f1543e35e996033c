#include "ccd/combined_solver.hpp"

#include <array>
#include <cmath>
#include <string>

#include "ccd/linalg.hpp"

namespace ccd {
namespace {

using Block = std::array<double, 4>;  // row-major 2x2
using Vec2 = std::array<double, 2>;

Vec2 mul(const Block& m, const Vec2& v) {
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

Block mul(const Block& a, const Block& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Block inverse(const Block& m, std::size_t pivot_index) {
    const double det = m[0] * m[3] - m[1] * m[2];
    const double scale = std::max({std::abs(m[0] * m[3]), std::abs(m[1] * m[2]), 1e-300});
    if (std::abs(det) <= 1e-14 * scale)
        throw SingularSystemError(
            "solve_combined: singular 2x2 pivot block at index " + std::to_string(pivot_index),
            pivot_index);
    const double inv = 1.0 / det;
    return {m[3] * inv, -m[1] * inv, -m[2] * inv, m[0] * inv};
}

/// Block Thomas elimination for a 2x2-block tridiagonal system with constant
/// sub/super blocks. Factors once; solves any number of right-hand sides.
class BlockTridiagonal {
public:
    BlockTridiagonal(Block sub, Block diag, Block super, std::size_t m)
        : sub_(sub), super_(super), dinv_(m) {
        Block d = diag;
        dinv_[0] = inverse(d, 0);
        for (std::size_t k = 1; k < m; ++k) {
            // D_k = B - A * D_{k-1}^{-1} * C
            const Block corr = mul(sub_, mul(dinv_[k - 1], super_));
            d = {diag[0] - corr[0], diag[1] - corr[1], diag[2] - corr[2], diag[3] - corr[3]};
            dinv_[k] = inverse(d, k);
        }
    }

    std::vector<Vec2> solve(std::vector<Vec2> r) const {
        const std::size_t m = dinv_.size();
        std::vector<Vec2> g(m);
        g[0] = r[0];
        for (std::size_t k = 1; k < m; ++k) {
            const Vec2 t = mul(sub_, mul(dinv_[k - 1], g[k - 1]));
            g[k] = {r[k][0] - t[0], r[k][1] - t[1]};
        }
        std::vector<Vec2> x(m);
        x[m - 1] = mul(dinv_[m - 1], g[m - 1]);
        for (std::size_t k = m - 1; k-- > 0;) {
            const Vec2 t = mul(super_, x[k + 1]);
            x[k] = mul(dinv_[k], Vec2{g[k][0] - t[0], g[k][1] - t[1]});
        }
        return x;
    }

private:
    Block sub_;
    Block super_;
    std::vector<Block> dinv_;
};

/// RHS of both stencil rows at node i in the h- and h^2-scaled form
/// (pure function of the grid values).
Vec2 scaled_rhs(const CombinedStencil& st, const std::vector<double>& u, std::size_t n,
                std::size_t i, bool periodic) {
    auto at = [&](std::ptrdiff_t j) -> double {
        if (periodic) {
            std::ptrdiff_t k = j % static_cast<std::ptrdiff_t>(n);
            if (k < 0) k += static_cast<std::ptrdiff_t>(n);
            return u[static_cast<std::size_t>(k)];
        }
        return u[static_cast<std::size_t>(j)];
    };
    const auto j = static_cast<std::ptrdiff_t>(i);

    double r1 = st.r1[0] * (at(j + 1) - at(j - 1));
    if (st.r1.size() > 1) r1 += st.r1[1] * (at(j + 2) - at(j - 2));

    double r2 = st.s0 * at(j) + st.s1 * (at(j + 1) + at(j - 1));
    if (st.s2 != 0.0)
        r2 += st.s2 * (st.s2_antisymmetric ? (at(j + 2) - at(j - 2)) : (at(j + 2) + at(j - 2)));

    return {r1, r2};
}

Block sub_block(const CombinedStencil& st) {
    return {st.alpha1, -st.gamma1, -st.alpha2, st.gamma2};
}

Block super_block(const CombinedStencil& st) {
    return {st.alpha1, st.gamma1, st.alpha2, st.gamma2};
}

}  // namespace

DerivativePair solve_combined(const CombinedStencil& st, const GridFunction& g,
                              const ExactBoundary& bc) {
    const std::size_t n = g.size();
    const std::size_t nb = st.boundary_width();
    require(n >= 5, "solve_combined: need at least 5 nodes");
    require(g.h > 0.0, "solve_combined: grid step must be positive");
    require(bc.first_left.size() == nb && bc.second_left.size() == nb &&
                bc.first_right.size() == nb && bc.second_right.size() == nb,
            "solve_combined: boundary data length does not match stencil width");

    const double h = g.h;
    const std::size_t m = n - 2 * nb;  // unknown nodes nb .. n-1-nb

    // Scaled unknowns (h D, h^2 D2) keep every block entry O(1).
    auto scaled_known = [&](std::size_t node) -> Vec2 {
        if (node < nb)
            return {h * bc.first_left[node], h * h * bc.second_left[node]};
        const std::size_t j = n - 1 - node;
        return {h * bc.first_right[j], h * h * bc.second_right[j]};
    };

    const Block sub = sub_block(st);
    const Block super = super_block(st);
    const Block diag = {1.0, 0.0, 0.0, 1.0};

    std::vector<Vec2> rhs(m);
    for (std::size_t k = 0; k < m; ++k) rhs[k] = scaled_rhs(st, g.values, n, nb + k, false);
    {
        const Vec2 t = mul(sub, scaled_known(nb - 1));
        rhs[0][0] -= t[0];
        rhs[0][1] -= t[1];
    }
    {
        const Vec2 t = mul(super, scaled_known(n - nb));
        rhs[m - 1][0] -= t[0];
        rhs[m - 1][1] -= t[1];
    }

    const BlockTridiagonal solver(sub, diag, super, m);
    const std::vector<Vec2> x = solver.solve(std::move(rhs));

    DerivativePair out;
    out.first.resize(n);
    out.second.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 v;
        if (i >= nb && i < n - nb)
            v = x[i - nb];
        else
            v = scaled_known(i);
        out.first[i] = v[0] / h;
        out.second[i] = v[1] / (h * h);
    }
    return out;
}

DerivativePair solve_combined_periodic(const CombinedStencil& st, const GridFunction& g) {
    const std::size_t n = g.size();
    require(n >= 5, "solve_combined_periodic: need at least 5 nodes");
    require(g.h > 0.0, "solve_combined_periodic: grid step must be positive");

    const double h = g.h;
    const Block sub = sub_block(st);
    const Block super = super_block(st);
    const Block diag = {1.0, 0.0, 0.0, 1.0};

    // Condense on the last node: solve the leading (n-1)-block tridiagonal
    // system for three right-hand sides (actual RHS and the two columns
    // coupling to v_{n-1}), then close with a 2x2 solve.
    const std::size_t m = n - 1;
    const BlockTridiagonal solver(sub, diag, super, m);

    std::vector<Vec2> r(m);
    for (std::size_t k = 0; k < m; ++k) r[k] = scaled_rhs(st, g.values, n, k, true);
    const Vec2 rn = scaled_rhs(st, g.values, n, n - 1, true);

    std::vector<Vec2> gc0(m, Vec2{0.0, 0.0}), gc1(m, Vec2{0.0, 0.0});
    gc0[0] = {sub[0], sub[2]};      // column 0 of A at block row 0
    gc1[0] = {sub[1], sub[3]};      // column 1 of A
    gc0[m - 1][0] += super[0];      // column 0 of C at block row m-1
    gc0[m - 1][1] += super[2];
    gc1[m - 1][0] += super[1];
    gc1[m - 1][1] += super[3];

    const std::vector<Vec2> y = solver.solve(std::move(r));
    const std::vector<Vec2> z0 = solver.solve(std::move(gc0));
    const std::vector<Vec2> z1 = solver.solve(std::move(gc1));

    // Closing row: A v_{n-2} + v_{n-1} + C v_0 = rn with
    // v_i = y_i - [z0_i z1_i] w.
    Block zfirst = {z0[0][0], z1[0][0], z0[0][1], z1[0][1]};
    Block zlast = {z0[m - 1][0], z1[m - 1][0], z0[m - 1][1], z1[m - 1][1]};
    const Block azl = mul(sub, zlast);
    const Block czf = mul(super, zfirst);
    const Block closing = {1.0 - azl[0] - czf[0], -azl[1] - czf[1],
                           -azl[2] - czf[2], 1.0 - azl[3] - czf[3]};
    const Vec2 ay = mul(sub, y[m - 1]);
    const Vec2 cy = mul(super, y[0]);
    const Vec2 w = mul(inverse(closing, n - 1), Vec2{rn[0] - ay[0] - cy[0], rn[1] - ay[1] - cy[1]});

    DerivativePair out;
    out.first.resize(n);
    out.second.resize(n);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = y[i][0] - z0[i][0] * w[0] - z1[i][0] * w[1];
        const double e = y[i][1] - z0[i][1] * w[0] - z1[i][1] * w[1];
        out.first[i] = d / h;
        out.second[i] = e / (h * h);
    }
    out.first[n - 1] = w[0] / h;
    out.second[n - 1] = w[1] / (h * h);
    return out;
}

}  // namespace ccd
