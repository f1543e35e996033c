#include "ccd/spectral.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "ccd/grid.hpp"
#include "ccd/linalg.hpp"

namespace ccd {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_w(double w) {
    require(w >= 0.0 && w <= kPi + 1e-12, "symbol: w must lie in [0, pi]");
}

// the 2x2 oracle is well defined on the full period; negative w is allowed
// so parity can be checked directly
void check_w_signed(double w) {
    require(std::abs(w) <= kPi + 1e-12, "symbol: w must lie in [-pi, pi]");
}

/// Solves the 4x4 system with row equilibration and partial pivoting,
/// tracking the scaled determinant.
std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b,
                             double w) {
    double det_scaled = 1.0;
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s = std::max(s, std::abs(a[i][j]));
        if (s == 0.0) det_scaled = 0.0;
        const double inv = s > 0.0 ? 1.0 / s : 1.0;
        for (int j = 0; j < 4; ++j) a[i][j] *= inv;
        b[i] *= inv;
    }
    for (int k = 0; k < 4; ++k) {
        int piv = k;
        for (int i = k + 1; i < 4; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            std::swap(b[piv], b[k]);
            det_scaled = -det_scaled;
        }
        det_scaled *= a[k][k];
        if (std::abs(det_scaled) <= 1e-12) {
            std::ostringstream msg;
            msg << "prefactored_symbol: singular system at w = " << w
                << " (scaled determinant " << det_scaled << ")";
            throw SingularSystemError(msg.str(), static_cast<std::size_t>(k));
        }
        for (int i = k + 1; i < 4; ++i) {
            const double m = a[i][k] / a[k][k];
            if (m == 0.0) continue;
            for (int j = k; j < 4; ++j) a[i][j] -= m * a[k][j];
            b[i] -= m * b[k];
        }
    }
    std::array<double, 4> x{};
    for (int k = 3; k >= 0; --k) {
        double acc = b[k];
        for (int j = k + 1; j < 4; ++j) acc -= a[k][j] * x[j];
        x[k] = acc / a[k][k];
    }
    return x;
}

}  // namespace

double printed_symbol(SchemeId scheme, DerivativeKind kind, double w) {
    check_w(w);
    const double c = std::cos(w), s = std::sin(w);
    const double c2 = std::cos(2.0 * w), c3 = std::cos(3.0 * w);
    if (scheme == SchemeId::ccd6) {
        if (kind == DerivativeKind::first)
            return 9.0 * s * (4.0 + c) / (24.0 + 20.0 * c + c2);
        return (81.0 - 48.0 * c - 33.0 * c2) / (48.0 + 40.0 * c + 2.0 * c2);
    }
    if (kind == DerivativeKind::first)
        return s * (293.0 + 126.0 * c + c2) / (6.0 * (34.0 + 33.0 * c + 3.0 * c2));
    return (1730.0 - 675.0 * c - 10870.0 * c2 - 29.0 * c3) /
           (36.0 * (34.0 + 33.0 * c + 3.0 * c2));
}

SymbolSample combined_symbol_oracle(const CombinedStencil& st, double w) {
    check_w_signed(w);
    using complexd = std::complex<double>;
    const double c = std::cos(w), s = std::sin(w);

    // Fourier substitution turns the two stencil rows into a 2x2 system in
    // (w', (w'')^2):
    //   (1 + 2 a1 c) w' - 2 g1 s W = 2 sum_k r1_k sin(kw)
    //   2 a2 s w'  + (1 + 2 g2 c) W = -s0 - 2 s1 cos w - 2 s2 cos 2w
    // The antisymmetric published s2 variant contributes -2i s2 sin 2w to the
    // second right-hand side instead, so the solve is done in complex form.
    const double m11 = 1.0 + 2.0 * st.alpha1 * c;
    const double m12 = -2.0 * st.gamma1 * s;
    const double m21 = 2.0 * st.alpha2 * s;
    const double m22 = 1.0 + 2.0 * st.gamma2 * c;

    double b1 = 2.0 * st.r1[0] * std::sin(w);
    if (st.r1.size() > 1) b1 += 2.0 * st.r1[1] * std::sin(2.0 * w);

    complexd b2(-st.s0 - 2.0 * st.s1 * c, 0.0);
    if (st.s2 != 0.0) {
        if (st.s2_antisymmetric)
            b2 -= complexd(0.0, 2.0 * st.s2 * std::sin(2.0 * w));
        else
            b2 -= 2.0 * st.s2 * std::cos(2.0 * w);
    }

    const double det = m11 * m22 - m12 * m21;
    const double scale = std::max({std::abs(m11 * m22), std::abs(m12 * m21), 1.0});
    if (std::abs(det) <= 1e-14 * scale) {
        std::ostringstream msg;
        msg << "combined_symbol_oracle: singular 2x2 system at w = " << w;
        throw SingularSystemError(msg.str(), 0);
    }

    const complexd wp = (b1 * m22 - m12 * b2) / det;
    const complexd wpp2 = (m11 * b2 - m21 * b1) / det;

    SymbolSample out;
    out.w = w;
    out.re_wp = wp.real();
    out.im_wp = wp.imag();
    out.re_wpp2 = wpp2.real();
    out.im_wpp2 = wpp2.imag();
    return out;
}

SymbolSample prefactored_symbol(const PrefactoredWeights& wt, double w) {
    check_w(w);
    const double c = std::cos(w);
    // The backward system is the forward one with the implicit couplings
    // evaluated at -w; sines on the right-hand side keep their sign.
    const double s = std::sin(w);
    const double si = (wt.direction == Direction::forward) ? s : -s;

    std::array<std::array<double, 4>, 4> a = {{
        {-wt.betaI * si, -1.0 - wt.betaI * c, -wt.thetaI * c, wt.thetaI * si},
        {1.0 + wt.betaI * c, -wt.betaI * si, -wt.thetaI * si, -wt.thetaI * c},
        {-wt.betaII * si, -wt.betaII * c, -1.0 - wt.thetaII * c, wt.thetaII * si},
        {wt.betaII * c, -wt.betaII * si, -wt.thetaII * si, -1.0 - wt.thetaII * c},
    }};
    const std::array<double, 4> r = {
        (wt.cI + wt.aI) * c + wt.bI,
        (wt.cI - wt.aI) * s,
        (wt.cII + wt.aII) * c + wt.bII,
        (wt.cII - wt.aII) * s,
    };

    const std::array<double, 4> x = solve4(a, r, w);
    SymbolSample out;
    out.w = w;
    out.re_wp = x[0];
    out.im_wp = x[1];
    out.re_wpp2 = x[2];
    out.im_wpp2 = x[3];
    return out;
}

std::vector<SymbolSample> sample_prefactored(const PrefactoredWeights& wt,
                                             std::span<const double> wgrid, bool parallel) {
    std::vector<SymbolSample> out(wgrid.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(wgrid.size());
#pragma omp parallel for if (parallel) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = prefactored_symbol(wt, wgrid[i]);
    return out;
}

std::vector<SymbolSample> sample_oracle(const CombinedStencil& st, std::span<const double> wgrid,
                                        bool parallel) {
    std::vector<SymbolSample> out(wgrid.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(wgrid.size());
#pragma omp parallel for if (parallel) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = combined_symbol_oracle(st, wgrid[i]);
    return out;
}

std::vector<double> chebyshev_wgrid(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k)
        w[k] = (kPi / 2.0) *
               (1.0 - std::cos((2.0 * static_cast<double>(k) + 1.0) * kPi /
                               (2.0 * static_cast<double>(n))));
    return w;
}

std::vector<double> midpoint_wgrid(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k)
        w[k] = (static_cast<double>(k) + 0.5) * kPi / static_cast<double>(n);
    return w;
}

RationalSymbolForm extract_rational_form(const PrefactoredWeights& wt) {
    const std::vector<double> wgrid = chebyshev_wgrid(64);
    const std::vector<SymbolSample> samples = sample_prefactored(wt, wgrid);

    // Homogeneous system in (fI, g, fII): cross-multiplied residuals
    //   Re w' (g.chi3) - sin w (fI.chi3) = 0
    //   Re W  (g.chi3) -       (fII.chi4) = 0
    Matrix m(2 * samples.size(), 10);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double w = samples[i].w;
        const double chi[4] = {1.0, std::cos(w), std::cos(2.0 * w), std::cos(3.0 * w)};
        const double s = std::sin(w);
        for (int j = 0; j < 3; ++j) {
            m(2 * i, static_cast<std::size_t>(j)) = -s * chi[j];
            m(2 * i, static_cast<std::size_t>(3 + j)) = samples[i].re_wp * chi[j];
            m(2 * i + 1, static_cast<std::size_t>(3 + j)) = samples[i].re_wpp2 * chi[j];
        }
        for (int j = 0; j < 4; ++j)
            m(2 * i + 1, static_cast<std::size_t>(6 + j)) = -chi[j];
    }

    Matrix ata(10, 10);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < 10; ++j) {
            const double mij = m(i, j);
            if (mij == 0.0) continue;
            for (std::size_t k = j; k < 10; ++k) ata(j, k) += mij * m(i, k);
        }
    for (std::size_t j = 0; j < 10; ++j)
        for (std::size_t k = 0; k < j; ++k) ata(j, k) = ata(k, j);

    Matrix vectors;
    const std::vector<double> eig = jacobi_eigenvalues(std::move(ata), &vectors);
    const double lam_max = std::max(eig.back(), 1e-300);
    if (eig[1] <= 1e-10 * lam_max) {
        std::ostringstream msg;
        msg << "extract_rational_form: rank-deficient fit (eigenvalue gap " << eig[0] << " / "
            << eig[1] << " of max " << lam_max << ")";
        throw std::runtime_error(msg.str());
    }

    std::array<double, 10> v{};
    for (std::size_t i = 0; i < 10; ++i) v[i] = vectors(i, 0);

    const double gsum = v[3] + v[4] + v[5];
    if (std::abs(gsum) <= 1e-10)
        throw std::runtime_error("extract_rational_form: degenerate denominator (g sums to zero)");
    const double scale = (70.0 / 36.0) / gsum;

    RationalSymbolForm out;
    for (int j = 0; j < 3; ++j) {
        out.fI[static_cast<std::size_t>(j)] = scale * v[static_cast<std::size_t>(j)];
        out.g[static_cast<std::size_t>(j)] = scale * v[static_cast<std::size_t>(3 + j)];
    }
    for (int j = 0; j < 4; ++j)
        out.fII[static_cast<std::size_t>(j)] = scale * v[static_cast<std::size_t>(6 + j)];
    out.scale = scale;

    // The fitted form must reproduce the samples.
    for (const SymbolSample& smp : samples) {
        const double w = smp.w;
        const double chi[4] = {1.0, std::cos(w), std::cos(2.0 * w), std::cos(3.0 * w)};
        const double den = out.g[0] * chi[0] + out.g[1] * chi[1] + out.g[2] * chi[2];
        const double wp = std::sin(w) * (out.fI[0] * chi[0] + out.fI[1] * chi[1] +
                                         out.fI[2] * chi[2]) / den;
        const double wpp2 = (out.fII[0] * chi[0] + out.fII[1] * chi[1] + out.fII[2] * chi[2] +
                             out.fII[3] * chi[3]) / den;
        const double scale_wp = std::max(1.0, std::abs(smp.re_wp));
        const double scale_w2 = std::max(1.0, std::abs(smp.re_wpp2));
        if (std::abs(wp - smp.re_wp) > 1e-9 * scale_wp ||
            std::abs(wpp2 - smp.re_wpp2) > 1e-9 * scale_w2)
            throw std::runtime_error(
                "extract_rational_form: fitted form does not reproduce the samples");
    }
    return out;
}

}  // namespace ccd
