#pragma once

// Quad-precision re-evaluation of the 2x2 symbol system for defect-order
// measurements. The second-symbol defect of the eighth-order scheme is about
// 1e-6 * w^10, i.e. 1e-26 at w = 0.01 -- far below double roundoff, so the
// log-log slope over [0.01, 0.1] needs __float128 arithmetic throughout,
// including exact rational stencil coefficients (the double-rounded ones
// already perturb the symbol at the 1e-17 level). Independent of the library
// implementation: own coefficients, own sin/cos series, plain Cramer solve.

#include <cmath>

namespace quad_oracle {

using quad = __float128;

inline quad qsin(quad x) {
    quad term = x, sum = x;
    for (int k = 1; k < 30; ++k) {
        term *= -x * x / quad((2 * k) * (2 * k + 1));
        sum += term;
    }
    return sum;
}

inline quad qcos(quad x) {
    quad term = 1, sum = 1;
    for (int k = 1; k < 30; ++k) {
        term *= -x * x / quad((2 * k - 1) * (2 * k));
        sum += term;
    }
    return sum;
}

struct SchemeQ {
    quad alpha1, gamma1, r1a, r1b;
    quad alpha2, gamma2, s0, s1, s2;
};

inline SchemeQ ccd6() {
    return {quad(7) / 16, quad(-1) / 16, quad(15) / 16, 0,
            quad(9) / 8,  quad(-1) / 8,  -6,            3, 0};
}

inline SchemeQ ccd8_corrected() {
    return {quad(17) / 36, quad(-1) / 12, quad(107) / 108, quad(-1) / 108,
            quad(23) / 18, quad(-1) / 6,  quad(-13) / 2,   quad(88) / 27, quad(-1) / 108};
}

struct SymbolQ {
    quad wp;
    quad wpp2;
};

/// (w', (w'')^2) of a symmetric combined stencil at scaled wavenumber w.
inline SymbolQ combined_symbol(const SchemeQ& st, quad w) {
    const quad c = qcos(w), s = qsin(w);
    const quad m11 = quad(1) + quad(2) * st.alpha1 * c;
    const quad m12 = quad(-2) * st.gamma1 * s;
    const quad m21 = quad(2) * st.alpha2 * s;
    const quad m22 = quad(1) + quad(2) * st.gamma2 * c;

    const quad b1 = quad(2) * st.r1a * s + quad(2) * st.r1b * qsin(quad(2) * w);
    const quad b2 = -st.s0 - quad(2) * st.s1 * c - quad(2) * st.s2 * qcos(quad(2) * w);

    const quad det = m11 * m22 - m12 * m21;
    return {(b1 * m22 - m12 * b2) / det, (m11 * b2 - m21 * b1) / det};
}

/// Defects of the second symbol at w, evaluated in quad and returned as
/// doubles (the magnitudes are representable; only their computation is not).
inline void second_symbol_defects(const SchemeQ& st, double w, double* absolute,
                                  double* relative) {
    const quad qw = w;
    const SymbolQ s = combined_symbol(st, qw);
    *absolute = std::abs(static_cast<double>(s.wpp2 - qw * qw));
    *relative = std::abs(static_cast<double>(s.wpp2 / (qw * qw) - quad(1)));
}

}  // namespace quad_oracle
