#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ccd/combined_solver.hpp"
#include "ccd/linalg.hpp"

using namespace ccd;

namespace {

constexpr double kPi = 3.14159265358979323846;

double urand(std::mt19937_64& gen) {
    return -1.0 + 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

GridFunction random_smooth_grid(std::mt19937_64& gen, std::size_t n, double h) {
    GridFunction g;
    g.x0 = 0.0;
    g.h = h;
    g.values.resize(n);
    const double a1 = urand(gen), a2 = urand(gen), a3 = urand(gen);
    const double p1 = urand(gen), p2 = urand(gen);
    const double span = static_cast<double>(n) * h;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * g.x(i) / span;
        g.values[i] = a1 * std::sin(t + p1) + a2 * std::sin(2.0 * t + p2) +
                      a3 * std::cos(3.0 * t) + 0.5;
    }
    return g;
}

// Independent oracle: the full 2N x 2N coupled system assembled densely in
// physical variables and solved by LU.
DerivativePair dense_reference(const CombinedStencil& st, const GridFunction& g,
                               const ExactBoundary* bc) {
    const std::size_t n = g.size();
    const bool periodic = bc == nullptr;
    const std::size_t nb = periodic ? 0 : st.boundary_width();
    const double h = g.h;

    Matrix a(2 * n, 2 * n);
    std::vector<double> rhs(2 * n, 0.0);
    auto wrap = [&](std::ptrdiff_t j) {
        std::ptrdiff_t k = j % static_cast<std::ptrdiff_t>(n);
        if (k < 0) k += static_cast<std::ptrdiff_t>(n);
        return static_cast<std::size_t>(k);
    };
    auto d_idx = [&](std::ptrdiff_t j) { return 2 * wrap(j); };
    auto e_idx = [&](std::ptrdiff_t j) { return 2 * wrap(j) + 1; };

    for (std::size_t i = 0; i < n; ++i) {
        const bool boundary = !periodic && (i < nb || i >= n - nb);
        if (boundary) {
            a(2 * i, 2 * i) = 1.0;
            a(2 * i + 1, 2 * i + 1) = 1.0;
            if (i < nb) {
                rhs[2 * i] = bc->first_left[i];
                rhs[2 * i + 1] = bc->second_left[i];
            } else {
                rhs[2 * i] = bc->first_right[n - 1 - i];
                rhs[2 * i + 1] = bc->second_right[n - 1 - i];
            }
            continue;
        }
        const auto j = static_cast<std::ptrdiff_t>(i);
        auto u = [&](std::ptrdiff_t k) { return g.values[wrap(k)]; };

        a(2 * i, d_idx(j)) += 1.0;
        a(2 * i, d_idx(j + 1)) += st.alpha1;
        a(2 * i, d_idx(j - 1)) += st.alpha1;
        a(2 * i, e_idx(j + 1)) += st.gamma1 * h;
        a(2 * i, e_idx(j - 1)) -= st.gamma1 * h;
        double r1 = st.r1[0] * (u(j + 1) - u(j - 1));
        if (st.r1.size() > 1) r1 += st.r1[1] * (u(j + 2) - u(j - 2));
        rhs[2 * i] = r1 / h;

        a(2 * i + 1, e_idx(j)) += 1.0;
        a(2 * i + 1, d_idx(j + 1)) += st.alpha2 / h;
        a(2 * i + 1, d_idx(j - 1)) -= st.alpha2 / h;
        a(2 * i + 1, e_idx(j + 1)) += st.gamma2;
        a(2 * i + 1, e_idx(j - 1)) += st.gamma2;
        double r2 = st.s0 * u(j) + st.s1 * (u(j + 1) + u(j - 1));
        if (st.s2 != 0.0)
            r2 += st.s2 *
                  (st.s2_antisymmetric ? (u(j + 2) - u(j - 2)) : (u(j + 2) + u(j - 2)));
        rhs[2 * i + 1] = r2 / (h * h);
    }

    const std::vector<double> x = solve_dense(std::move(a), std::move(rhs));
    DerivativePair out;
    out.first.resize(n);
    out.second.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.first[i] = x[2 * i];
        out.second[i] = x[2 * i + 1];
    }
    return out;
}

double rel_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double scale = 1.0, gap = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
    return gap / scale;
}

}  // namespace

TEST_CASE("ccd6 reproduces x^2 exactly with exact boundaries") {
    const std::size_t n = 11;
    GridFunction g;
    g.x0 = 0.0;
    g.h = 0.1;
    g.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.values[i] = g.x(i) * g.x(i);

    ExactBoundary bc;
    bc.first_left = {0.0};
    bc.second_left = {2.0};
    bc.first_right = {2.0 * g.x(n - 1)};
    bc.second_right = {2.0};

    const DerivativePair d = solve_combined(build_ccd6(), g, bc);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(d.first[i] - 2.0 * g.x(i)) <= 1e-11);
        CHECK(d.second[i] == doctest::Approx(2.0).epsilon(1e-11));
    }
}

TEST_CASE("corrected ccd8 annihilates constants") {
    const std::size_t n = 12;
    GridFunction g;
    g.x0 = 0.0;
    g.h = 0.25;
    g.values.assign(n, 5.0);

    ExactBoundary bc;
    bc.first_left = {0.0, 0.0};
    bc.second_left = {0.0, 0.0};
    bc.first_right = {0.0, 0.0};
    bc.second_right = {0.0, 0.0};

    const DerivativePair d = solve_combined(build_ccd8(true), g, bc);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(d.first[i]) <= 1e-12);
        CHECK(std::abs(d.second[i]) <= 1e-12);
    }
}

TEST_CASE("block elimination agrees with the dense reference (exact boundaries)") {
    std::mt19937_64 gen(314);
    for (bool eighth : {false, true}) {
        const CombinedStencil st = eighth ? build_ccd8(true) : build_ccd6();
        const std::size_t nb = st.boundary_width();
        for (int trial = 0; trial < 5; ++trial) {
            const GridFunction g = random_smooth_grid(gen, 12, 0.2);
            ExactBoundary bc;
            for (std::size_t j = 0; j < nb; ++j) {
                bc.first_left.push_back(urand(gen));
                bc.second_left.push_back(urand(gen));
                bc.first_right.push_back(urand(gen));
                bc.second_right.push_back(urand(gen));
            }
            const DerivativePair fast = solve_combined(st, g, bc);
            const DerivativePair ref = dense_reference(st, g, &bc);
            CHECK(rel_gap(ref.first, fast.first) <= 1e-12);
            CHECK(rel_gap(ref.second, fast.second) <= 1e-12);
        }
    }
}

TEST_CASE("cyclic elimination agrees with the dense reference (periodic)") {
    std::mt19937_64 gen(271);
    for (bool eighth : {false, true}) {
        const CombinedStencil st = eighth ? build_ccd8(true) : build_ccd6();
        for (int trial = 0; trial < 5; ++trial) {
            const GridFunction g = random_smooth_grid(gen, 12, 0.5);
            const DerivativePair fast = solve_combined_periodic(st, g);
            const DerivativePair ref = dense_reference(st, g, nullptr);
            CHECK(rel_gap(ref.first, fast.first) <= 1e-12);
            CHECK(rel_gap(ref.second, fast.second) <= 1e-12);
        }
    }
}

TEST_CASE("periodic solve commutes with grid rotation") {
    std::mt19937_64 gen(99);
    const std::size_t n = 32, shift = 5;
    const GridFunction g = random_smooth_grid(gen, n, 0.1);

    GridFunction rotated = g;
    for (std::size_t i = 0; i < n; ++i) rotated.values[i] = g.values[(i + shift) % n];

    const DerivativePair base = solve_combined_periodic(build_ccd6(), g);
    const DerivativePair rot = solve_combined_periodic(build_ccd6(), rotated);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(rot.first[i] - base.first[(i + shift) % n]) <= 1e-13);
        CHECK(std::abs(rot.second[i] - base.second[(i + shift) % n]) <=
              1e-13 * std::max(1.0, std::abs(base.second[(i + shift) % n])));
    }
}

TEST_CASE("periodic ccd6 error drops sixth order between N=32 and N=64") {
    auto run = [](std::size_t n) {
        GridFunction g;
        g.x0 = 0.0;
        g.h = 2.0 * kPi / static_cast<double>(n);
        g.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) g.values[i] = std::sin(g.x(i));
        const DerivativePair d = solve_combined_periodic(build_ccd6(), g);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            err = std::max(err, std::abs(d.first[i] - std::cos(g.x(i))));
        return err;
    };
    const double ratio = run(32) / run(64);
    CHECK(ratio > 64.0 * 0.8);
    CHECK(ratio < 64.0 * 1.2);
}

TEST_CASE("boundary data length mismatch is rejected") {
    GridFunction g;
    g.h = 0.1;
    g.values.assign(10, 0.0);
    ExactBoundary bc;  // empty: wrong length for nb = 1
    CHECK_THROWS_AS(solve_combined(build_ccd6(), g, bc), std::invalid_argument);
}

TEST_CASE("too-small grids are rejected") {
    GridFunction g;
    g.h = 0.1;
    g.values.assign(4, 0.0);
    ExactBoundary bc;
    bc.first_left = bc.second_left = bc.first_right = bc.second_right = {0.0};
    CHECK_THROWS_AS(solve_combined(build_ccd6(), g, bc), std::invalid_argument);
    CHECK_THROWS_AS(solve_combined_periodic(build_ccd6(), g), std::invalid_argument);
}

TEST_CASE("a singular pivot block is reported with its index") {
    // fabricated stencil whose elimination hits an exactly singular block
    CombinedStencil st;
    st.order = 2;
    st.alpha1 = 1.0;
    st.gamma1 = 0.0;
    st.alpha2 = 0.0;
    st.gamma2 = 1.0;
    st.r1 = {1.0};
    st.s0 = -2.0;
    st.s1 = 1.0;

    GridFunction g;
    g.h = 0.1;
    g.values.assign(8, 1.0);
    ExactBoundary bc;
    bc.first_left = bc.second_left = bc.first_right = bc.second_right = {0.0};
    CHECK_THROWS_AS(solve_combined(st, g, bc), SingularSystemError);
}
