#include "ccd/weights.hpp"

#include <stdexcept>

namespace ccd {

PrefactoredWeights mirror_backward(const PrefactoredWeights& fwd) {
    if (fwd.direction != Direction::forward)
        throw std::invalid_argument("mirror_backward: input must be forward weights");

    PrefactoredWeights b;
    b.direction = Direction::backward;
    b.betaI = fwd.betaI;
    b.thetaI = -fwd.thetaI;
    b.betaII = -fwd.betaII;
    b.thetaII = fwd.thetaII;
    b.aI = -fwd.cI;
    b.bI = -fwd.bI;
    b.cI = -fwd.aI;
    b.aII = fwd.cII;
    b.bII = fwd.bII;
    b.cII = fwd.aII;
    return b;
}

}  // namespace ccd
