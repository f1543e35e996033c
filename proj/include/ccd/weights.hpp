#pragma once

#include <array>

namespace ccd {

enum class Direction { forward, backward };

/// The ten weights of one biased (prefactored) operator pair: the implicit
/// couplings (beta, theta) and explicit coefficients (a, b, c) of the
/// first-derivative row (I) and the second-derivative row (II).
///
/// Forward relations, swept right to left:
///   D_i  + betaI  D_{i+1} + thetaI h D2_{i+1}  = (aI u_{i-1} + bI u_i + cI u_{i+1}) / h
///   D2_i + (betaII/h) D_{i+1} + thetaII D2_{i+1}
///        = (aII u_{i-1} + bII u_i + cII u_{i+1}) / h^2
///
/// Backward relations couple i-1 instead and are swept left to right.
struct PrefactoredWeights {
    Direction direction = Direction::forward;
    double betaI = 0.0, thetaI = 0.0, aI = 0.0, bI = 0.0, cI = 0.0;
    double betaII = 0.0, thetaII = 0.0, aII = 0.0, bII = 0.0, cII = 0.0;

    static constexpr std::size_t kCount = 10;

    /// Canonical coordinate order used by the solvers:
    /// betaI thetaI aI bI cI betaII thetaII aII bII cII.
    std::array<double, kCount> to_array() const {
        return {betaI, thetaI, aI, bI, cI, betaII, thetaII, aII, bII, cII};
    }

    static PrefactoredWeights from_array(const std::array<double, kCount>& v,
                                         Direction dir = Direction::forward) {
        PrefactoredWeights w;
        w.direction = dir;
        w.betaI = v[0];
        w.thetaI = v[1];
        w.aI = v[2];
        w.bI = v[3];
        w.cI = v[4];
        w.betaII = v[5];
        w.thetaII = v[6];
        w.aII = v[7];
        w.bII = v[8];
        w.cII = v[9];
        return w;
    }
};

/// Backward weights of a forward operator under the grid reflection
/// i+1 <-> i-1. First derivatives are odd under reflection and second
/// derivatives even, so the explicit first-row coefficients reverse with a
/// sign flip, the second-row ones reverse without, and the two cross
/// couplings (thetaI, betaII) change sign. The mapping is an involution and
/// produces symbols that are complex conjugates of the forward ones.
PrefactoredWeights mirror_backward(const PrefactoredWeights& fwd);

}  // namespace ccd
