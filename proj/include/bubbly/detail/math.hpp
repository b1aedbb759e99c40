#pragma once

#include <cmath>

namespace bubbly::detail {

// sin(x)/x, with a series fallback so small arguments keep full precision.
inline double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

// sin(x)/x - cos(x) = x^2/3 - x^4/30 + x^6/840 - ... The direct expression
// loses about 2/x^2 ulp to cancellation, so small arguments take the series;
// at the 0.3 crossover both branches are accurate to ~1e-14 relative.
inline double sinc_minus_cos(double x) {
    const double ax = std::abs(x);
    if (ax < 0.3) {
        const double u = x * x;
        return u * (1.0 / 3.0 +
                    u * (-1.0 / 30.0 +
                         u * (1.0 / 840.0 +
                              u * (-1.0 / 45360.0 +
                                   u * (1.0 / 3991680.0 +
                                        u * (-1.0 / 518918400.0 +
                                             u * (1.0 / 93405312000.0)))))));
    }
    return std::sin(x) / x - std::cos(x);
}

}
