#pragma once

#include <complex>

#include "bubbly/detail/math.hpp"
#include "bubbly/errors.hpp"

namespace bubbly {

// Closed-form values of the Helmholtz layer potentials applied to the
// constant density on a sphere of radius R.

// S_D^k[1] on the boundary: -e^{ikR} sin(kR)/k, with limit -R as k -> 0.
inline std::complex<double> single_layer_boundary(double k, double R) {
    if (!(k >= 0.0) || !(R > 0.0))
        throw invalid_input_error("need k >= 0 and R > 0");
    const double x = k * R;
    return -std::polar(R * detail::sinc(x), x);
}

// (K_D^k)*[1] on the boundary: sinc(kR) e^{ikR} - e^{2ikR}/2, limit 1/2 at k -> 0.
inline std::complex<double> neumann_poincare_boundary(double k, double R) {
    if (!(k >= 0.0) || !(R > 0.0))
        throw invalid_input_error("need k >= 0 and R > 0");
    const double x = k * R;
    return std::polar(detail::sinc(x), x) - std::polar(0.5, 2.0 * x);
}

// S_D^k[1] at distance r >= R from the center: -(R sin(kR)/k) e^{ikr}/r.
inline std::complex<double> single_layer_exterior(double k, double R, double r) {
    if (!(k >= 0.0) || !(R > 0.0))
        throw invalid_input_error("need k >= 0 and R > 0");
    if (r < R)
        throw domain_error("exterior evaluation requires r >= R");
    return -std::polar(R * R * detail::sinc(k * R) / r, k * r);
}

}
