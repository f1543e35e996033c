#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ccd {

/// Uniformly spaced grid samples of a function on [x0, x0 + (n-1) h]
/// (or [x0, x0 + n h) when used periodically).
struct GridFunction {
    double x0 = 0.0;
    double h = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
};

/// First and second derivatives over the nodes of a GridFunction.
struct DerivativePair {
    std::vector<double> first;
    std::vector<double> second;
};

inline void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace ccd
