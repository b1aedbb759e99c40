#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

#include <Eigen/Dense>

#include "bubbly/detail/math.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/media.hpp"

namespace bubbly {

enum class ScatteringVariant { exact, tilde, simplified };

// Monopole scattering response of a single bubble. The exact variant is the
// full breathing-mode expression; tilde is its resonance-centered rational
// approximation in x_b; simplified is the same shape parametrized directly by
// omega with damping eps = R k_w.
struct ScatteringModel {
    ScatteringVariant variant = ScatteringVariant::exact;
    double delta = 0.0;
    double cb_over_cw = 0.0;
    double radius = 0.0;
    double c_b = 0.0;
    double c_w = 0.0;
    double x_M = 0.0;
    double omega_M = 0.0;
};

// Smallest positive root of 1 - delta - x cot x = 0, located in (0, pi/2).
inline double minnaert_root(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw invalid_input_error("density contrast must lie in (0, 1)");
    auto g = [delta](double x) { return 1.0 - delta - x * std::cos(x) / std::sin(x); };
    double lo = 1e-12;
    double hi = std::numbers::pi / 2.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    // Newton polish to machine precision; g'(x) = (x - sin x cos x)/sin^2 x
    // is positive on the bracket, so the iteration stays monotone.
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        const double s = std::sin(x);
        const double step = g(x) * s * s / (x - s * std::cos(x));
        const double next = x - step;
        if (!(next > lo) || !(next < hi))
            break;
        x = next;
        if (std::abs(step) < 1e-15 * x)
            break;
    }
    return x;
}

inline ScatteringModel make_scattering_model(ScatteringVariant variant, const MediaParams& media,
                                             double R) {
    const DerivedAcoustics ac = derive_acoustics(media, 0.0, R);
    ScatteringModel m;
    m.variant = variant;
    m.delta = ac.delta;
    m.cb_over_cw = ac.c_b / ac.c_w;
    m.radius = R;
    m.c_b = ac.c_b;
    m.c_w = ac.c_w;
    m.x_M = minnaert_root(ac.delta);
    m.omega_M = ac.c_b * m.x_M / R;
    return m;
}

// Scattering function of the chosen variant. The argument is x_b for the
// exact and tilde variants and omega for the simplified variant. The exact
// form is evaluated with sin/cos throughout (no cot), so it stays finite at
// x = n pi; all variants vanish in the zero-argument limit.
inline std::complex<double> scattering_fn(const ScatteringModel& m, double at) {
    using namespace std::complex_literals;
    if (!(at >= 0.0))
        throw invalid_input_error("scattering function argument must be nonnegative");
    if (at == 0.0)
        return 0.0;
    switch (m.variant) {
    case ScatteringVariant::exact: {
        const double x = at;
        const double smc = detail::sinc_minus_cos(x);  // (sin x - x cos x)/x
        const std::complex<double> num = m.radius * x * smc;
        const std::complex<double> den =
            -x * smc + m.delta * std::sin(x) - 1i * (m.delta * m.cb_over_cw * x * std::sin(x));
        return num / den;
    }
    case ScatteringVariant::tilde: {
        const double x = at;
        const double ratio = m.x_M / x;
        return 1.0 / std::complex<double>(ratio * ratio - 1.0, -m.cb_over_cw * x);
    }
    case ScatteringVariant::simplified: {
        const double omega = at;
        const double ratio = m.omega_M / omega;
        const double eps = m.radius * omega / m.c_w;
        return 1.0 / std::complex<double>(ratio * ratio - 1.0, -eps);
    }
    }
    throw invalid_input_error("unknown scattering variant");
}

// Length-dimensioned monopole amplitude at angular frequency omega, as it
// enters the point-interaction system. The exact variant already carries the
// factor R; the approximate variants are dimensionless and get scaled by R.
inline std::complex<double> monopole_amplitude(const ScatteringModel& m, double omega) {
    switch (m.variant) {
    case ScatteringVariant::exact:
        return scattering_fn(m, omega * m.radius / m.c_b);
    case ScatteringVariant::tilde:
        return m.radius * scattering_fn(m, omega * m.radius / m.c_b);
    case ScatteringVariant::simplified:
        return m.radius * scattering_fn(m, omega);
    }
    throw invalid_input_error("unknown scattering variant");
}

inline double minnaert_frequency(const MediaParams& media, double R) {
    const DerivedAcoustics ac = derive_acoustics(media, 0.0, R);
    return ac.c_b * minnaert_root(ac.delta) / R;
}

// Argmax of |f_s| over [0, 0.1]: dense grid scan followed by ternary
// refinement of the bracketing interval.
inline double peak_scattering_arg(const ScatteringModel& m, std::size_t grid_points = 100000) {
    if (m.variant != ScatteringVariant::exact)
        throw invalid_input_error("peak search is defined for the exact variant");
    if (grid_points < 3)
        throw invalid_input_error("need at least three grid points");
    const double hi = 0.1;
    auto magnitude = [&m](double x) { return std::abs(scattering_fn(m, x)); };
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double x = hi * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        const double v = magnitude(x);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double step = hi / static_cast<double>(grid_points - 1);
    double a = best > 0 ? (static_cast<double>(best) - 1.0) * step : 0.0;
    double b = best + 1 < grid_points ? (static_cast<double>(best) + 1.0) * step : hi;
    while (b - a > 1e-13) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        if (magnitude(m1) < magnitude(m2))
            a = m1;
        else
            b = m2;
    }
    return 0.5 * (a + b);
}

// Monopole scattered field f_s u_in0 e^{ik|x-c|}/|x-c|; algebraically equal to
// -4 pi f_s u_in0 G(x, c, k) with this library's Green's function convention.
inline std::complex<double> monopole_field(const Eigen::Vector3d& x, const Eigen::Vector3d& center,
                                           std::complex<double> f_s, std::complex<double> u_in0,
                                           double k) {
    const double r = (x - center).norm();
    if (!(r > 0.0))
        throw singular_evaluation_error("monopole field evaluated at its own center");
    return f_s * u_in0 * std::polar(1.0, k * r) / r;
}

}
