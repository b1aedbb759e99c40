#pragma once

#include <cmath>
#include <complex>

#include "bubbly/detail/math.hpp"
#include "bubbly/errors.hpp"

namespace bubbly {

// 2x2 system coupling the constant interior/exterior layer densities of one
// bubble. All entries are dimensionless functions of x_b = k_b R, x_w = k_w R
// and the density contrast delta.
struct BreathingMatrix {
    std::complex<double> a11, a12, a21, a22;
    double x_b = 0.0;
    double x_w = 0.0;
    double delta = 0.0;

    std::complex<double> det() const { return a11 * a22 - a12 * a21; }
};

inline BreathingMatrix breathing_matrix(double x_b, double x_w, double delta) {
    if (!(x_b >= 0.0) || !(x_w >= 0.0))
        throw invalid_input_error("dimensionless frequencies must be nonnegative");
    if (!(delta > 0.0))
        throw invalid_input_error("density contrast must be positive");
    using namespace std::complex_literals;
    BreathingMatrix m;
    m.x_b = x_b;
    m.x_w = x_w;
    m.delta = delta;
    const std::complex<double> eb = std::polar(1.0, x_b);
    const std::complex<double> ew = std::polar(1.0, x_w);
    m.a11 = -eb * detail::sinc(x_b);
    m.a12 = ew * detail::sinc(x_w);
    m.a21 = eb / delta * detail::sinc_minus_cos(x_b);
    m.a22 = -ew * (detail::sinc(x_w) - 1i * std::sin(x_w));
    return m;
}

// Surface density amplitudes (psi_b = C_b, psi_w = C_w on the boundary) for
// incident pressure u_in0 at the bubble center.
struct BreathingSolution {
    std::complex<double> C_b;
    std::complex<double> C_w;
    std::complex<double> u_in0;
    bool near_singular = false;  // |det| fell below tolerance; values still returned
    double det_magnitude = 0.0;
};

inline BreathingSolution solve_breathing(const BreathingMatrix& m, std::complex<double> u_in0,
                                         double R) {
    if (!(R > 0.0))
        throw invalid_input_error("radius must be positive");
    const std::complex<double> det = m.det();
    const double scale = std::abs(m.a11) * std::abs(m.a22) + std::abs(m.a12) * std::abs(m.a21);
    if (det == 0.0)
        throw singular_system_error("breathing system is singular", 0.0);
    BreathingSolution s;
    s.u_in0 = u_in0;
    s.det_magnitude = std::abs(det);
    s.near_singular = s.det_magnitude < 1e-12 * scale;
    const std::complex<double> rhs = u_in0 / R;
    s.C_b = rhs * m.a22 / det;
    s.C_w = -rhs * m.a21 / det;
    return s;
}

}
