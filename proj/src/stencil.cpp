#include "ccd/stencil.hpp"

#include "ccd/grid.hpp"

namespace ccd {

CombinedStencil build_ccd6() {
    CombinedStencil s;
    s.order = 6;
    s.alpha1 = 7.0 / 16.0;
    s.gamma1 = -1.0 / 16.0;
    s.r1 = {15.0 / 16.0};
    s.alpha2 = 9.0 / 8.0;
    s.gamma2 = -1.0 / 8.0;
    s.s0 = -6.0;
    s.s1 = 3.0;
    s.s2 = 0.0;
    return s;
}

CombinedStencil build_ccd8(bool corrected) {
    CombinedStencil s;
    s.order = 8;
    s.alpha1 = 17.0 / 36.0;
    s.gamma1 = -1.0 / 12.0;
    s.r1 = {107.0 / 108.0, -1.0 / 108.0};
    s.alpha2 = 23.0 / 18.0;
    s.gamma2 = -1.0 / 6.0;
    s.s0 = -13.0 / 2.0;
    s.s1 = 88.0 / 27.0;
    s.s2 = -1.0 / 108.0;
    s.s2_antisymmetric = !corrected;
    return s;
}

std::pair<double, double> stencil_residual(const CombinedStencil& st, const ScalarFn& u,
                                           const ScalarFn& du, const ScalarFn& d2u, double x,
                                           double h) {
    require(h > 0.0, "stencil_residual: h must be positive");

    const double um2 = u(x - 2.0 * h), um1 = u(x - h), u0 = u(x), up1 = u(x + h),
                 up2 = u(x + 2.0 * h);
    const double dm1 = du(x - h), d0 = du(x), dp1 = du(x + h);
    const double em1 = d2u(x - h), e0 = d2u(x), ep1 = d2u(x + h);

    double lhs1 = d0 + st.alpha1 * (dp1 + dm1) + st.gamma1 * h * (ep1 - em1);
    double rhs1 = st.r1[0] * (up1 - um1) / h;
    if (st.r1.size() > 1) rhs1 += st.r1[1] * (up2 - um2) / h;

    double lhs2 = e0 + st.alpha2 * (dp1 - dm1) / h + st.gamma2 * (ep1 + em1);
    double rhs2 = (st.s0 * u0 + st.s1 * (up1 + um1)) / (h * h);
    if (st.s2 != 0.0) {
        const double pair = st.s2_antisymmetric ? (up2 - um2) : (up2 + um2);
        rhs2 += st.s2 * pair / (h * h);
    }

    return {lhs1 - rhs1, lhs2 - rhs2};
}

}  // namespace ccd
